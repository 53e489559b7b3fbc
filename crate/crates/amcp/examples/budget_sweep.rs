//! Sweeps stability budgets over a generated benchmark and prints the
//! resulting table.
//!
//! cargo run -p amcp --example budget_sweep

use amcp::benchgen::{generate, BenchSpec};
use amcp::negotiation::NegotiationOptions;
use amcp::sweep::sweep;
use amcp::CommonRestriction;

fn main() -> amcp::Result<()> {
    let bench = generate(&BenchSpec {
        n: 24,
        blocks: 3,
        p_in: 0.8,
        p_out: 0.05,
        perturb_fraction: 0.2,
        seed: 42,
    })?;
    let r = CommonRestriction::identity(bench.graph.modules());
    let taus = [0.6, 0.7, 0.8, 0.85, 0.9, 0.95];
    let result = sweep(
        &bench.graph,
        &bench.previous,
        &r,
        &taus,
        0.9,
        &NegotiationOptions::default(),
    )?;

    println!(
        "unconstrained: {} steps, u_coh {:.4}, lowest u_sta {:.4}",
        result.reference.steps(),
        result.reference.final_u_coh,
        result.reference_min_u_sta()
    );
    println!("tau_sta  u_coh   u_sta   sw      steps  diverged");
    for row in &result.rows {
        println!(
            "{:<8} {:.4}  {:.4}  {:.4}  {:<6} {}",
            row.tau_sta, row.u_coh, row.u_sta, row.sw, row.steps, row.diverged
        );
    }
    Ok(())
}
