use clap::Parser;

fn main() {
    let cli = freebialg::cli::Cli::parse();
    match freebialg::cli::run(&cli) {
        Ok((out, code)) => {
            println!("{out}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
