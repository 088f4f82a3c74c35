use clap::{Args, ValueEnum};

use freelab::control::{root_locus, stability_boundary, GainKind};

use super::{gains, load};
use crate::config::ParamsPreset;
use crate::output::{num, opt, RunOutput, Table};
use crate::{Common, Failure};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GainArg {
    Kp,
    Kd,
    Ki,
}

#[derive(Debug, Args)]
pub struct LocusArgs {
    /// Gain to sweep; the others stay at the configured or tuned values.
    #[arg(long, value_enum)]
    gain: GainArg,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Logarithmic spacing (needs 0 < from < to).
    #[arg(long)]
    log: bool,
}

pub fn run(common: &Common, args: &LocusArgs) -> Result<RunOutput, Failure> {
    let (cfg, mut out) = load(common)?;
    let geom = cfg.geometry()?;
    let params = cfg.params(&geom, ParamsPreset::Canonical)?;
    let (from, to, n) = (args.from, args.to, args.points);
    if n < 2 || !(from.is_finite() && to.is_finite() && from < to) || (args.log && from <= 0.0) {
        return Err(Failure::Config("need --points >= 2 and --from < --to (both positive with --log)".into()));
    }
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if args.log {
                from * (to / from).powf(f)
            } else {
                from + (to - from) * f
            }
        })
        .collect();
    let kind = match args.gain {
        GainArg::Kp => GainKind::Kp,
        GainArg::Kd => GainKind::Kd,
        GainArg::Ki => GainKind::Ki,
    };
    let (base, _) = gains(&cfg, &geom, &params)?;
    let rows = root_locus(&geom, &params, &base, kind, &grid).map_err(|e| Failure::Numeric(e.to_string()))?;
    let mut t = Table::new(
        "locus",
        &["gain", "root1_re", "root1_im", "root2_re", "root2_im", "root3_re", "root3_im", "max_re", "stable"],
    );
    for r in &rows {
        let mut row = vec![num(r.gain)];
        for z in r.roots.roots {
            row.push(num(z.re));
            row.push(num(z.im));
        }
        row.push(num(r.roots.max_real_part()));
        row.push(r.roots.stable.to_string());
        t.push(row);
    }
    out.table(t);
    let mut b = Table::new("locus_boundary", &["from", "to", "boundary_gain"]);
    for w in grid.windows(2).zip(rows.windows(2)) {
        let (g, r) = w;
        if r[0].roots.stable != r[1].roots.stable {
            b.push(vec![num(g[0]), num(g[1]), opt(stability_boundary(&geom, &params, &base, kind, g[0], g[1]))]);
        }
    }
    out.table(b);
    Ok(out)
}
