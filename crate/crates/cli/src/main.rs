use clap::Parser;

fn main() {
    let args = love_res_cli::Args::parse();
    std::process::exit(love_res_cli::main_with_args(&args));
}
