//! Tabulates the heterogeneity generating functions over a range of inputs.

use jumptrack::hgf::{HgfKind, HgfParams};

fn main() -> jumptrack::Result<()> {
    let params = HgfParams::new(50.0, 10.0)?;
    print!("{:>6}", "h");
    for kind in HgfKind::ALL {
        print!("{:>22}", format!("{kind:?}"));
    }
    println!();
    for h in [0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0] {
        print!("{h:>6.1}");
        for kind in HgfKind::ALL {
            print!("{:>22.6}", kind.eval(h, &params)?);
        }
        println!();
    }
    Ok(())
}
