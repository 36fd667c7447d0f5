use clap::Parser;

use psinar::cli::{run_to_completion, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not configuration errors.
            if err.use_stderr() {
                err.print().expect("stderr");
                std::process::exit(4);
            }
            err.print().expect("stdout");
            std::process::exit(0);
        }
    };
    std::process::exit(run_to_completion(&cli));
}
