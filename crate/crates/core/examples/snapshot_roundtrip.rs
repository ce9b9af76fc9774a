//! Writes a fluid state to a snapshot file and reads it back.

use nsk_limit::functionals::HNormalization;
use nsk_limit::harness::{make_ill_prepared, DataFamily};
use nsk_limit::io::{read_snapshot, write_snapshot, Snapshot};
use nsk_limit::{Grid, PhysParams, Spectral};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(2, 32, 16.0)?;
    let sp = Spectral::new(grid);
    let data = make_ill_prepared(&sp, &DataFamily::default(), PhysParams::new(0.1, 0.1, 0.5, 2.0)?, 0.05)?;

    let path = std::env::temp_dir().join("nsk_example.nsk");
    write_snapshot(&path, &Snapshot::from_state(&data.state))?;
    let back = read_snapshot(&path, Some(&grid))?;
    let state = back.to_state(HNormalization::Physical)?;
    println!("{} bytes, fields {:?}", std::fs::metadata(&path)?.len(), back.fields.iter().map(|f| &f.0).collect::<Vec<_>>());
    println!("identical: {}", state == data.state);
    std::fs::remove_file(&path)?;
    Ok(())
}
