use clap::Parser;
use mathrank_cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for problem in &outcome.problems {
                eprintln!("mathrank: {problem}");
            }
            std::process::exit(outcome.exit_code());
        }
        Err(err) => {
            eprintln!("mathrank: error: {err:#}");
            std::process::exit(1);
        }
    }
}
