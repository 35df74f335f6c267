// Copyright 2026 The gaussim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::process::ExitCode;

use clap::Parser;
use gaussim_cli::{run, scenario_table, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        print!("{}", scenario_table());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("no scenario given; see `gaussim --help` or `gaussim --list`");
        return ExitCode::from(2);
    };
    match run(&command) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
