use serde::Serialize;

use super::config::{choose_offsets, config_error, ExperimentConfig, OffsetConfig, Validated};
use super::manifest::RunRecorder;
use crate::cocycle::{uniformity_diagnostic, UniformityReport, MIN_UNIFORMITY_OFFSETS};
use crate::error::Result;
use crate::operator::{combes_thomas_check, CoefficientWindow};
use crate::spectrum::{
    cantor_diagnostic, compare_estimates, finite_section_spectrum, gamma_curve, measure_trend, zero_set_estimate,
    CantorReport, EstimateComparison, TrendPoint,
};
use crate::subshift::{boshernitzan_sequence, words_of_length};

/// Everything a subcommand needs besides its own flags.
pub struct Context<'a> {
    pub config: &'a ExperimentConfig,
    pub validated: &'a Validated,
    pub seed: u64,
}

impl Context<'_> {
    fn coefficients(&self, rec: &mut RunRecorder) -> Result<CoefficientWindow<f64>> {
        rec.stage("coefficients", || self.validated.coefficients())
    }

    fn offsets(&self, coeffs: &CoefficientWindow<f64>, steps: u64) -> Result<Vec<i64>> {
        choose_offsets(coeffs, steps, &self.config.offsets, self.seed)
    }

    fn uniformity_reports(
        &self,
        coeffs: &CoefficientWindow<f64>,
        rec: &mut RunRecorder,
    ) -> Result<Vec<UniformityReport<f64>>> {
        let n = self.validated.uniformity_n;
        let offsets = OffsetConfig {
            count: self.config.offsets.count.max(MIN_UNIFORMITY_OFFSETS),
            ..self.config.offsets
        };
        let base = choose_offsets(coeffs, 4 * n, &offsets, self.seed)?;
        rec.stage("uniformity", || {
            self.config
                .uniformity
                .energies
                .iter()
                .map(|&e| uniformity_diagnostic(coeffs, e, n, &base))
                .collect()
        })
    }
}

pub fn orbit(ctx: &Context, rec: &mut RunRecorder) -> Result<()> {
    let cfg = ctx.config;
    let orbit = rec.stage("orbit", || ctx.validated.orbit(cfg.orbit_radius))?;
    rec.write("orbit.txt", |w| orbit.write_text(w))?;
    let complexity = rec.stage("complexity", || {
        (1..=cfg.n_max)
            .map(|n| Ok((n, words_of_length(&orbit, n, cfg.sample_length)?.len())))
            .collect::<Result<Vec<_>>>()
    })?;
    rec.write("complexity.csv", |w| {
        use std::io::Write;
        writeln!(w, "n,complexity")?;
        for (n, c) in &complexity {
            writeln!(w, "{n},{c}")?;
        }
        Ok(())
    })
}

pub fn lyapunov(ctx: &Context, rec: &mut RunRecorder) -> Result<()> {
    let v = ctx.validated;
    let coeffs = ctx.coefficients(rec)?;
    let offsets = ctx.offsets(&coeffs, ctx.config.n_steps)?;
    let curve = rec.stage("gamma_curve", || {
        gamma_curve(&coeffs, &v.grid, ctx.config.n_steps, &offsets)
    })?;
    rec.write("lyapunov.csv", |w| curve.write_csv(w))?;
    let reports = ctx.uniformity_reports(&coeffs, rec)?;
    rec.write_json("uniformity.json", &reports)
}

pub fn uniformity(ctx: &Context, rec: &mut RunRecorder) -> Result<()> {
    let coeffs = ctx.coefficients(rec)?;
    let reports = ctx.uniformity_reports(&coeffs, rec)?;
    rec.write_json("uniformity.json", &reports)
}

#[derive(Serialize)]
struct TrendSummary<'a> {
    points: &'a [TrendPoint],
    estimate: serde_json::Value,
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    gamma_zero_set: serde_json::Value,
    finite_section: serde_json::Value,
    /// Absent when either estimate is empty.
    comparison: Option<EstimateComparison>,
    trend: TrendSummary<'a>,
    cantor: CantorReport,
}

pub fn spectrum(ctx: &Context, rec: &mut RunRecorder) -> Result<()> {
    let (cfg, v) = (ctx.config, ctx.validated);
    let coeffs = ctx.coefficients(rec)?;
    let trend = rec.stage("measure_trend", || {
        measure_trend(
            &coeffs,
            v.grid.lo(),
            v.grid.hi(),
            &v.orders,
            |n| ctx.offsets(&coeffs, n),
            v.threshold,
        )
    })?;
    // The default single order is exactly the configured grid; reuse it.
    let single = v.orders.len() == 1 && v.orders[0].step == cfg.grid.step && v.orders[0].n_steps == cfg.n_steps;
    let curve = if single {
        trend.finest_curve.clone()
    } else {
        let offsets = ctx.offsets(&coeffs, cfg.n_steps)?;
        rec.stage("gamma_curve", || gamma_curve(&coeffs, &v.grid, cfg.n_steps, &offsets))?
    };
    let gamma_est = zero_set_estimate(&curve, v.threshold)?;
    let sections = rec.stage("finite_sections", || {
        finite_section_spectrum(&coeffs, &cfg.sizes, cfg.tol)
    })?;
    let comparison = compare_estimates(&gamma_est, &sections.estimate).ok();
    let cantor = cantor_diagnostic(&trend.estimate, &trend.finest_curve, cfg.isolation_eps);
    let report = SpectrumReport {
        gamma_zero_set: gamma_est.to_json(),
        finite_section: sections.estimate.to_json(),
        comparison,
        trend: TrendSummary {
            points: &trend.points,
            estimate: trend.estimate.to_json(),
        },
        cantor,
    };
    rec.write_json("spectrum.json", &report)?;
    rec.write("trend.csv", |w| trend.write_csv(w))?;
    rec.write("curve.csv", |w| curve.write_csv(w))
}

pub fn boshernitzan(ctx: &Context, rec: &mut RunRecorder) -> Result<()> {
    let cfg = ctx.config;
    let points = rec.stage("boshernitzan", || {
        let orbit = ctx.validated.orbit(cfg.orbit_radius)?;
        boshernitzan_sequence(&orbit, cfg.n_max, cfg.sample_length)
    })?;
    rec.write("boshernitzan.csv", |w| {
        use std::io::Write;
        writeln!(w, "n,eta,n_eta")?;
        for p in &points {
            writeln!(w, "{},{},{}", p.n, crate::fmt_f64(p.eta), crate::fmt_f64(p.n_eta))?;
        }
        Ok(())
    })
}

pub fn combes_thomas(ctx: &Context, rec: &mut RunRecorder, energy: Option<f64>) -> Result<()> {
    let cfg = ctx.config;
    let energy = energy
        .or(cfg.energy)
        .ok_or_else(|| config_error("combes-thomas needs an energy (--energy or config \"energy\")"))?;
    let coeffs = ctx.coefficients(rec)?;
    let r = cfg.section_radius as i64;
    let report = rec.stage("combes_thomas", || {
        combes_thomas_check(&coeffs, energy, -r, r, 0, cfg.combes_thomas_options())
    })?;
    rec.write_json("combes_thomas.json", &report)
}
