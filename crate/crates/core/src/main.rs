fn main() {
    std::process::exit(ris_quant::cli::run(std::env::args_os()));
}
