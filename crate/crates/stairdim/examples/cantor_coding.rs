//! Symbolic coding on the middle-thirds Cantor system: cylinders,
//! encoding reals to words, decoding coded points, fixed points.
//!
//! ```bash
//! cargo run -p stairdim --example cantor_coding
//! ```

use stairdim::ifs::{cylinder, decode, encode, fixed_point, EncodeResult};
use stairdim::{CodedPoint, IfsSpec, Interval, MapSpec, Settings, Word};

fn main() -> stairdim::Result<()> {
    let settings = Settings::default();
    let spec = IfsSpec::new(
        vec![
            MapSpec::affine(1.0 / 3.0, 0.0)?,
            MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)?,
        ],
        Interval::new(0.0, 1.0),
    )?;

    println!("cylinders:");
    for symbols in [vec![0], vec![1], vec![0, 1], vec![1, 0, 1]] {
        let info = cylinder(&spec, &Word::new(symbols))?;
        println!(
            "  [{}] -> [{:.6}, {:.6}]",
            info.word, info.interval.lo, info.interval.hi
        );
    }

    println!("encoding:");
    for x in [0.7, 0.25, 0.5] {
        match encode(&spec, x, 6)? {
            EncodeResult::Word(w) => println!("  {x} -> ({w})"),
            EncodeResult::Gap { prefix } => {
                println!("  {x} -> gap after prefix {prefix}")
            }
        }
    }

    println!("decoding:");
    let quarter = CodedPoint::periodic(Word::new(vec![0, 1]))?;
    println!(
        "  cycle 01 -> {:.12} (the point 1/4)",
        decode(&spec, &quarter, 1e-13)?
    );
    println!(
        "  constant 1 -> {:.12}",
        decode(&spec, &CodedPoint::constant(1), 1e-13)?
    );

    println!("fixed points:");
    for symbol in [0, 1] {
        println!("  f_{symbol}: {}", fixed_point(&spec, symbol, &settings)?);
    }
    Ok(())
}
