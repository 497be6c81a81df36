fn main() {
    let env = std::env::vars().collect();
    let code = mldo_cli::run(std::env::args_os(), &env, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
