//! Command-line front end for `hypercover`.

pub mod args;
pub mod commands;
pub mod manifest;

use std::time::Instant;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{execute, exit_code, write_outputs, Sink};
use crate::manifest::{manifest_path, sha256_hex, OutputDigest, RunManifest};

/// Parse `argv`, run the command, write its outputs and manifest. Returns the
/// process exit status.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if threads == 0 {
        eprintln!("error: --threads: must be at least 1");
        return 2;
    }
    // Ignore failure: the global pool may already exist when embedded.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();

    let start = Instant::now();
    let result = execute(&cli.command).and_then(|outputs| {
        write_outputs(&outputs)?;
        if let Some(primary) = &outputs.primary {
            let manifest = RunManifest {
                command_line: argv.clone(),
                version: env!("CARGO_PKG_VERSION"),
                seed: outputs.seed,
                samples: outputs.samples,
                design_hash: outputs.design_hash.clone(),
                threads,
                wall_time_s: start.elapsed().as_secs_f64(),
                outputs: outputs
                    .files
                    .iter()
                    .filter_map(|(sink, bytes)| match sink {
                        Sink::File(p) => Some(OutputDigest {
                            path: p.clone(),
                            sha256: sha256_hex(bytes),
                        }),
                        _ => None,
                    })
                    .collect(),
            };
            let mut text = serde_json::to_vec_pretty(&manifest)?;
            text.push(b'\n');
            std::fs::write(manifest_path(primary), text)?;
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
