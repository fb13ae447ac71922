//! One bilateral trade, priced competitively and by a monopolist.
//!
//! ```text
//! cargo run --example monopoly_pricing -- [x_m y_m f_m x_n y_n f_n]
//! ```

use wealthsim::pairwise::{
    execute_pair_trade, monopoly_price, pairwise_competitive_price, PairSide, Regime, ResidualSupply, Trader,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let v = match args.len() {
        0 => vec![2.0, 1.0, 0.5, 1.0, 2.0, 0.5],
        6 => args,
        n => return Err(format!("expected 0 or 6 numbers, got {n}").into()),
    };
    let m = Trader::new(v[0], v[1], v[2]);
    let n = Trader::new(v[3], v[4], v[5]);

    let competitive = pairwise_competitive_price(&m, &n).ok_or("pair cannot trade")?;
    let monopoly = monopoly_price(&m, &n).ok_or("monopoly price undefined")?;
    let (lo, hi) = ResidualSupply::new(&m, &n).feasible_prices();
    println!("feasible monopoly prices: ({lo:.6}, {hi:.6})");

    for (name, regime, p) in [
        ("competitive", Regime::Competitive, competitive),
        ("monopoly", Regime::Monopoly { monopolist: PairSide::First }, monopoly),
    ] {
        let t = execute_pair_trade((0, 1), &m, &n, regime, p)?;
        println!("{name:>11}: price {p:.6}");
        for (who, k) in [("monopolist", 0), ("counterpart", 1)] {
            let (x, y) = t.after[k];
            println!(
                "    {who:>11}: ({x:.6}, {y:.6})  utility {:.6} -> {:.6}",
                t.utility_before[k], t.utility_after[k]
            );
        }
    }
    Ok(())
}
