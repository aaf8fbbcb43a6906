//! Roofline plots as standalone SVG.
//!
//! Log-log axes: operational intensity (flops per modeled byte) against
//! flops per cycle. The compute ceiling is always the scalar peak, even for
//! vectorized variants.

use std::fmt::Write as _;

use super::BenchRecord;
use crate::error::{Error, Result};
use crate::kernels::VariantTag;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ceilings {
    pub peak_flops_per_cycle: f64,
    pub bandwidth_bytes_per_cycle: f64,
}

impl Ceilings {
    /// `min(peak, bandwidth * intensity)`.
    pub fn attainable(&self, intensity: f64) -> f64 {
        self.peak_flops_per_cycle.min(self.bandwidth_bytes_per_cycle * intensity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RooflinePlot {
    pub svg: String,
    /// Points above a ceiling, which the machine model says cannot happen.
    pub warnings: Vec<String>,
    /// Number of polylines, one per variant with at least one measured record.
    pub series: usize,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 9] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#17becf",
];

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn px(&self, intensity: f64) -> f64 {
        let t = (intensity.log10() - self.x.0) / (self.x.1 - self.x.0);
        LEFT + t * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, perf: f64) -> f64 {
        let t = (perf.log10() - self.y.0) / (self.y.1 - self.y.0);
        HEIGHT - BOTTOM - t * (HEIGHT - TOP - BOTTOM)
    }
}

/// Decade bounds covering all values.
fn decades(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v.log10()), hi.max(v.log10()))
    });
    let (lo, hi) = (lo.floor(), hi.ceil());
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

pub fn emit_roofline(records: &[BenchRecord], ceilings: &Ceilings) -> Result<RooflinePlot> {
    if records.is_empty() {
        return Err(Error::Parameter("no records to plot".into()));
    }
    if !(ceilings.peak_flops_per_cycle > 0.0 && ceilings.bandwidth_bytes_per_cycle > 0.0) {
        return Err(Error::Parameter("roofline ceilings must be positive".into()));
    }
    let points: Vec<(VariantTag, f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let p = r.flops_per_cycle?;
            (p > 0.0 && r.intensity > 0.0).then_some((r.variant, r.intensity, p))
        })
        .collect();
    if points.is_empty() {
        return Err(Error::Parameter("no measured records with positive performance".into()));
    }

    let mut warnings = Vec::new();
    for r in records {
        let Some(p) = r.flops_per_cycle else { continue };
        let bw = ceilings.bandwidth_bytes_per_cycle * r.intensity;
        if p > bw {
            warnings.push(format!(
                "{} {}: {} flops/cycle above bandwidth ceiling {} at intensity {}",
                r.variant, r.levels, p, bw, r.intensity
            ));
        }
        if p > ceilings.peak_flops_per_cycle {
            warnings.push(format!(
                "{} {}: {} flops/cycle above scalar peak {}",
                r.variant, r.levels, p, ceilings.peak_flops_per_cycle
            ));
        }
    }

    let ridge = ceilings.peak_flops_per_cycle / ceilings.bandwidth_bytes_per_cycle;
    let axes = Axes {
        x: decades(points.iter().map(|p| p.1).chain([ridge])),
        y: decades(points.iter().map(|p| p.2).chain([ceilings.peak_flops_per_cycle])),
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for e in axes.x.0 as i32..=axes.x.1 as i32 {
        let x = axes.px(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"##,
            y0 + 18.0
        );
    }
    for e in axes.y.0 as i32..=axes.y.1 as i32 {
        let y = axes.py(10f64.powi(e));
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">operational intensity [flops/byte]</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">performance [flops/cycle]</text>"#,
        (y0 + y1) / 2.0
    );

    // ceilings, sampled across the x range and clipped to the plot
    let lo = 10f64.powf(axes.x.0);
    let hi = 10f64.powf(axes.x.1);
    let roof: Vec<String> = (0..=200)
        .map(|k| lo * (hi / lo).powf(k as f64 / 200.0))
        .map(|i| {
            let p = ceilings.attainable(i).max(10f64.powf(axes.y.0));
            format!("{:.2},{:.2}", axes.px(i), axes.py(p))
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline class="ceiling" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        roof.join(" ")
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">scalar peak {} flops/cycle</text>"#,
        x1 - 4.0,
        axes.py(ceilings.peak_flops_per_cycle) - 6.0,
        ceilings.peak_flops_per_cycle
    );

    let mut variants: Vec<VariantTag> = Vec::new();
    for &(v, _, _) in &points {
        if !variants.contains(&v) {
            variants.push(v);
        }
    }
    for (k, v) in variants.iter().enumerate() {
        let color = PALETTE[*v as usize % PALETTE.len()];
        let coords: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.0 == *v)
            .map(|p| (axes.px(p.1), axes.py(p.2)))
            .collect();
        let line: Vec<String> = coords.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-variant="{v}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            line.join(" ")
        );
        for (x, y) in &coords {
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
        }
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{v}</text>"#,
            x1 + 10.0,
            x1 + 30.0,
            x1 + 36.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(RooflinePlot { svg, warnings, series: variants.len() })
}
