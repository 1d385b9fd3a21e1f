fn main() {
    std::process::exit(mgl_lane_emden::app::main_with_args(std::env::args_os()));
}
