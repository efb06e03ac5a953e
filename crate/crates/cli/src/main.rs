use clap::error::ErrorKind;
use clap::Parser;
use kbmrac_cli::args::{Cli, Command};
use kbmrac_cli::commands;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };

    let result = match &cli.command {
        Command::Run(args) => commands::cmd_run(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Diagnose(args) => commands::cmd_diagnose(args),
        Command::Presets(args) => commands::cmd_presets(args),
    };

    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
