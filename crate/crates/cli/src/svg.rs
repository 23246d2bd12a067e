use mfzoo::dyadic::SpectrumReport;
use std::fmt::Write;

const W: f64 = 480.0;
const H: f64 = 320.0;
const PAD: f64 = 40.0;

/// Line plot of the estimated dimension against the abscissa, with the
/// model line dashed when the report carries one.
pub fn spectrum_svg(report: &SpectrumReport) -> String {
    let xs: Vec<f64> = report.rows.iter().map(|r| r.abscissa).collect();
    let (x0, x1) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let px = |x: f64| PAD + (x - x0) / span * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - y.clamp(0.0, 1.0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">abscissa [{x0:.3}, {x1:.3}]</text>"#,
        W / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" font-size="12" transform="rotate(-90 12 {})" text-anchor="middle">dimension [0, 1]</text>"#,
        H / 2.0,
        H / 2.0
    );

    let polyline = |pts: Vec<(f64, f64)>, style: &str| -> String {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        format!(r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" "))
    };
    let model: Vec<(f64, f64)> = xs
        .iter()
        .zip(&report.model_line)
        .filter_map(|(&x, m)| m.map(|y| (x, y)))
        .collect();
    if model.len() > 1 {
        let _ = writeln!(s, "{}", polyline(model, r#"stroke="gray" stroke-dasharray="6 4""#));
    }
    let est: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter_map(|r| r.dim_estimate.map(|d| (r.abscissa, d)))
        .collect();
    if est.len() > 1 {
        let _ = writeln!(s, "{}", polyline(est.clone(), r#"stroke="steelblue" stroke-width="2""#));
    }
    for (x, y) in est {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            px(x),
            py(y)
        );
    }
    s.push_str("</svg>\n");
    s
}
