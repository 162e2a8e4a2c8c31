//! Solving-degree probe on small public systems, printed as CSV.
//!
//! cargo run --release --example solving_degree -- 2^6,7,5,2,2 5

use pesto::solvedeg::{gb_complexity_bound, probe, SolveConfig, CSV_HEADER};
use pesto::PestoParams;

fn main() -> pesto::Result<()> {
    let mut args = std::env::args().skip(1);
    let params = PestoParams::parse(&args.next().unwrap_or_else(|| "2^6,7,5,2,2".into()))?;
    let trials: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let cfg = SolveConfig::default();

    println!("{CSV_HEADER}");
    for seed in 0..trials {
        let p = probe(&params, seed, &cfg)?;
        println!("{}", p.row.to_csv());
        eprintln!(
            "  pairs {} basis {} quotient {:?} max pair degree {} preimages {} ranks {:?}",
            p.estimate.pairs_processed,
            p.estimate.basis_size,
            p.estimate.quotient_dim,
            p.estimate.max_pair_degree,
            p.preimages.len(),
            p.estimate.rank_profile.iter().map(|r| (r.degree, r.rank)).collect::<Vec<_>>()
        );
    }

    let bound = gb_complexity_bound(params.n() as u64, 33, 2.3)?;
    eprintln!("C({}+33, {})^2.3 = 2^{:.1}", params.n(), params.n(), bound.log2);
    Ok(())
}
