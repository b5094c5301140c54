use std::fmt::Write as _;

use rayon::prelude::*;

use super::{AlertError, AlertSettings, BATTERY, DISTANCE, OUTPUT, TOLERANCE};
use crate::fcl::{compile, CompileMode, CompiledController, FclProgram};

/// Step sizes of the comparison sweep, in the units of each input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSteps {
    pub distance: f64,
    pub battery: f64,
    pub tolerance: f64,
}

impl Default for GridSteps {
    fn default() -> Self {
        GridSteps {
            distance: 50.0,
            battery: 10.0,
            tolerance: 60.0,
        }
    }
}

/// Explicit axis values of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub battery: Vec<f64>,
    pub distance: Vec<f64>,
    pub tolerance: Vec<f64>,
}

fn axis(name: &str, (lo, hi): (f64, f64), step: f64) -> Result<Vec<f64>, AlertError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(AlertError::BadStep {
            axis: name.to_string(),
            step,
        });
    }
    let slack = (hi - lo).abs() * 1e-9;
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let v = lo + step * k as f64;
        if v > hi + slack {
            break;
        }
        values.push(v.min(hi));
        k += 1;
    }
    Ok(values)
}

impl Grid {
    /// `lo, lo + step, ...` up to each input's upper bound.
    pub fn from_steps(c: &CompiledController, steps: GridSteps) -> Result<Self, AlertError> {
        let domain = |var: &str| {
            c.input(var)
                .map(|v| v.domain)
                .ok_or_else(|| AlertError::LabelMismatch(format!("controller has no input `{var}`")))
        };
        Ok(Grid {
            battery: axis(BATTERY, domain(BATTERY)?, steps.battery)?,
            distance: axis(DISTANCE, domain(DISTANCE)?, steps.distance)?,
            tolerance: axis(TOLERANCE, domain(TOLERANCE)?, steps.tolerance)?,
        })
    }

    pub fn single(battery: f64, distance: f64, tolerance: f64) -> Self {
        Grid {
            battery: vec![battery],
            distance: vec![distance],
            tolerance: vec![tolerance],
        }
    }

    /// Points in battery, distance, tolerance order.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &b in &self.battery {
            for &d in &self.distance {
                for &t in &self.tolerance {
                    out.push((b, d, t));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.battery.len() * self.distance.len() * self.tolerance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonPoint {
    pub battery: f64,
    pub distance: f64,
    pub tolerance: f64,
    pub uniform_trigger: f64,
    pub twofold_trigger: f64,
    pub uniform_fired: bool,
    pub twofold_fired: bool,
}

impl ComparisonPoint {
    pub fn diverges(&self) -> bool {
        self.uniform_fired != self.twofold_fired
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub grid: Grid,
    pub threshold: f64,
    pub points: Vec<ComparisonPoint>,
    /// Indices into `points` where the two models disagree.
    pub divergences: Vec<usize>,
}

impl ComparisonReport {
    pub fn divergent_points(&self) -> impl Iterator<Item = &ComparisonPoint> {
        self.divergences.iter().map(|&i| &self.points[i])
    }

    pub fn find(&self, battery: f64, distance: f64, tolerance: f64) -> Option<&ComparisonPoint> {
        self.points
            .iter()
            .find(|p| p.battery == battery && p.distance == distance && p.tolerance == tolerance)
    }

    /// `battery,distance,tolerance,uniform_trigger,twofold_trigger,diverges`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("battery,distance,tolerance,uniform_trigger,twofold_trigger,diverges\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{}",
                p.battery,
                p.distance,
                p.tolerance,
                p.uniform_trigger,
                p.twofold_trigger,
                p.diverges()
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let uniform = self.points.iter().filter(|p| p.uniform_fired).count();
        let twofold = self.points.iter().filter(|p| p.twofold_fired).count();
        let mut out = format!(
            "{} grid points, threshold {}\nuniform model fires at {} points, twofold model at {}\n{} divergence points\n",
            self.points.len(),
            self.threshold,
            uniform,
            twofold,
            self.divergences.len()
        );
        for p in self.divergent_points() {
            let _ = writeln!(
                out,
                "  battery={} distance={} tolerance={}: uniform {} ({:.4}), twofold {} ({:.4})",
                p.battery,
                p.distance,
                p.tolerance,
                if p.uniform_fired { "Alert" } else { "NoAlert" },
                p.uniform_trigger,
                if p.twofold_fired { "Alert" } else { "NoAlert" },
                p.twofold_trigger
            );
        }
        out
    }
}

fn trigger(c: &CompiledController, (b, d, t): (f64, f64, f64)) -> Result<f64, AlertError> {
    let r = c.infer_with(&[(BATTERY, b), (DISTANCE, d), (TOLERANCE, t)])?;
    r.output(OUTPUT)
        .ok_or_else(|| AlertError::LabelMismatch(format!("controller has no output `{OUTPUT}`")))
}

/// Compiles `program` under both partition models and evaluates every
/// grid point with each. Points are evaluated in parallel; the report
/// keeps grid order.
pub fn compare_models(
    program: &FclProgram,
    grid: &Grid,
    settings: &AlertSettings,
) -> Result<ComparisonReport, AlertError> {
    let uniform = compile(program, CompileMode::UniformBaseline)?.with_cog_samples(settings.cog_samples)?;
    let twofold = compile(program, CompileMode::Twofold)?.with_cog_samples(settings.cog_samples)?;
    let threshold = settings.threshold;
    let points = grid
        .points()
        .into_par_iter()
        .map(|p| {
            let u = trigger(&uniform, p)?;
            let w = trigger(&twofold, p)?;
            Ok(ComparisonPoint {
                battery: p.0,
                distance: p.1,
                tolerance: p.2,
                uniform_trigger: u,
                twofold_trigger: w,
                uniform_fired: u >= threshold,
                twofold_fired: w >= threshold,
            })
        })
        .collect::<Result<Vec<_>, AlertError>>()?;
    let divergences = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.diverges())
        .map(|(i, _)| i)
        .collect();
    Ok(ComparisonReport {
        grid: grid.clone(),
        threshold,
        points,
        divergences,
    })
}

/// [`compare_models`] over a grid built from step sizes.
pub fn compare_with_steps(
    program: &FclProgram,
    steps: GridSteps,
    settings: &AlertSettings,
) -> Result<ComparisonReport, AlertError> {
    let grid = Grid::from_steps(&compile(program, CompileMode::Twofold)?, steps)?;
    compare_models(program, &grid, settings)
}
