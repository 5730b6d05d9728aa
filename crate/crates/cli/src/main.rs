use std::process::ExitCode;

use flatinv_cli::{parse_args, run, Invocation, EXIT_PARSE};

fn exit(status: i32) -> ExitCode {
    ExitCode::from(status as u8)
}

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Invocation::Run(c) => c,
        Invocation::Text(status, text) => {
            print!("{text}");
            return exit(status);
        }
        Invocation::Error(json) => {
            print!("{json}");
            return exit(EXIT_PARSE);
        }
    };
    let (status, json) = run(&config);
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                let err = serde_json::json!({
                    "error": "ParseError",
                    "message": format!("cannot write {}: {e}", path.display()),
                });
                println!("{}", serde_json::to_string_pretty(&err).unwrap());
                return exit(EXIT_PARSE);
            }
        }
        None => print!("{json}"),
    }
    exit(status)
}
