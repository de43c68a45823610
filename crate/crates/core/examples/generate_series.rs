//! Writes Mackey-Glass and Lorenz series as CSV and reads them back. A
//! prediction config can point `series_path` at these files.
//!
//!     cargo run --release --example generate_series -- out_dir

use std::path::PathBuf;

use nalgebra::DMatrix;
use prodres::tasks::{
    lorenz, mackey_glass, read_series_csv, write_series_csv, LorenzParams, MackeyGlassParams,
};

fn main() -> prodres::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "series".into()));
    std::fs::create_dir_all(&dir).map_err(|e| prodres::Error::Io { path: dir.clone(), source: e })?;

    let mg = mackey_glass(5000, &MackeyGlassParams::default(), 1000)?;
    let mg = DMatrix::from_vec(mg.len(), 1, mg);
    let mg_path = dir.join("mackey_glass.csv");
    write_series_csv(&mg_path, &["x"], &mg)?;

    let lz = lorenz(5000, &LorenzParams::default())?;
    let lz_path = dir.join("lorenz.csv");
    write_series_csv(&lz_path, &["x", "y", "z"], &lz)?;

    for (path, original) in [(&mg_path, &mg), (&lz_path, &lz)] {
        let (names, back) = read_series_csv(path)?;
        println!(
            "{}: columns {:?}, {} rows, exact round trip: {}",
            path.display(),
            names,
            back.nrows(),
            &back == original
        );
    }
    Ok(())
}
