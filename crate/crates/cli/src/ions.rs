use std::process::ExitCode;

use iontrap::atomic::IonDatabase;

use crate::cli::IonsAction;
use crate::output::{g6, to_json_6};
use crate::CliError;

pub fn run(action: &IonsAction, db: &IonDatabase) -> Result<ExitCode, CliError> {
    match action {
        IonsAction::List => {
            println!("{:<6} {:<8} {:<12} {:<12}", "ion", "qubit", "gamma11", "gamma22");
            for ion in &db.ions {
                let multipole = ion.qubit_multipole().map(|m| m.to_string()).unwrap_or_else(|| "-".into());
                let rate = |u| ion.total_rate(u).map(g6).unwrap_or_else(|| "-".into());
                println!("{:<6} {:<8} {:<12} {:<12}", ion.name, multipole, rate(1), rate(2));
            }
        }
        IonsAction::Show { name } => {
            let ion = db.find(name).map_err(|e| CliError::Input(e.to_string()))?;
            println!("{}", to_json_6(ion));
        }
    }
    Ok(ExitCode::SUCCESS)
}
