//! Pattern containment and exact enumeration of avoidance classes: the
//! per-cell machinery underneath the grid counts.

use gridgrow::{contains, enumerate_av, AvEnumerator, Basis, Permutation};

fn main() -> gridgrow::Result<()> {
    let host = Permutation::from_digits("41523")?;
    for pattern in ["231", "321"] {
        let p = Permutation::from_digits(pattern)?;
        println!(
            "{host} {} {p}",
            if contains(&p, &host) { "contains" } else { "avoids  " }
        );
    }

    // every class avoiding one length-3 pattern is counted by the Catalan
    // numbers, whatever the pattern
    println!("\ncounts of Av(β) for each length-3 pattern β:");
    for beta in ["123", "132", "213", "231", "312", "321"] {
        let basis = Basis::parse(&format!("Av({beta})"))?;
        let counts = enumerate_av(&basis, 9)?;
        let shown: Vec<String> = counts.counts().iter().map(|c| c.to_string()).collect();
        println!("    Av({beta}): {}", shown.join(", "));
    }

    // a multi-pattern basis, with the avoiders themselves at length 4
    let basis = Basis::parse("Av(2143, 3412)")?;
    let mut enumerator = AvEnumerator::new(basis.clone());
    println!("\n{basis} counts: ");
    let counts = enumerator.counts(8)?;
    let shown: Vec<String> = counts.counts().iter().map(|c| c.to_string()).collect();
    println!("    {}", shown.join(", "));
    let length4: Vec<String> = enumerator
        .list(4)?
        .iter()
        .map(|p| p.to_string())
        .collect();
    println!("    all but two of the 4! patterns survive at length 4:");
    println!("    {}", length4.join(" "));
    Ok(())
}
