//! Dot-plot SVG rendering of power tables: statistics on the y axis, power
//! on the x axis, one marker series per effect level. Output is plain text
//! built with fixed-precision formatting, so identical input bytes yield
//! identical image bytes.

use std::collections::BTreeSet;

use anyhow::{bail, Result};

#[derive(Debug, Clone)]
pub struct CsvRow {
    pub scenario: String,
    pub statistic: String,
    pub effect: f64,
    pub power: f64,
}

pub fn parse_power_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if !header.starts_with("scenario,statistic,effect,") {
        bail!("not a power table: unexpected header {header:?}");
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 6 {
            bail!("line {}: expected at least 6 fields, got {}", idx + 2, fields.len());
        }
        rows.push(CsvRow {
            scenario: fields[0].to_string(),
            statistic: fields[1].to_string(),
            effect: fields[2].parse()?,
            power: fields[5].parse()?,
        });
    }
    if rows.is_empty() {
        bail!("power table has no data rows");
    }
    Ok(rows)
}

/// Scenario ids in first-appearance order.
pub fn scenario_ids(rows: &[CsvRow]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut ids = Vec::new();
    for row in rows {
        if seen.insert(row.scenario.clone()) {
            ids.push(row.scenario.clone());
        }
    }
    ids
}

const COLORS: &[&str] = &["#d62728", "#2ca02c", "#1f77b4", "#9467bd", "#ff7f0e", "#8c564b"];

fn marker(series: usize, x: f64, y: f64, color: &str) -> String {
    match series % 3 {
        0 => format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="4.5" fill="{color}"/>"#),
        1 => format!(
            r#"<path d="M {:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z" fill="{color}"/>"#,
            x,
            y - 5.2,
            x - 4.8,
            y + 3.8,
            x + 4.8,
            y + 3.8
        ),
        _ => format!(
            r#"<rect x="{:.2}" y="{:.2}" width="8.4" height="8.4" fill="{color}"/>"#,
            x - 4.2,
            y - 4.2
        ),
    }
}

/// Render one scenario's rows (already filtered) as an SVG dot plot.
pub fn render_scenario(scenario: &str, rows: &[CsvRow]) -> String {
    // Statistic order: first appearance, drawn top to bottom.
    let mut stats: Vec<String> = Vec::new();
    for row in rows {
        if !stats.contains(&row.statistic) {
            stats.push(row.statistic.clone());
        }
    }
    let mut effects: Vec<f64> = Vec::new();
    for row in rows {
        if !effects.iter().any(|&e| e == row.effect) {
            effects.push(row.effect);
        }
    }
    effects.sort_by(f64::total_cmp);

    let margin_left = 150.0;
    let margin_top = 48.0;
    let row_height = 24.0;
    let plot_width = 560.0;
    let height = margin_top + row_height * stats.len() as f64 + 46.0;
    let width = margin_left + plot_width + 30.0;
    let x_of = |power: f64| margin_left + power * plot_width;
    let y_of = |slot: usize| margin_top + row_height * (slot as f64 + 0.5);

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect width="{width:.0}" height="{height:.0}" fill="white"/>"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="20" font-family="monospace" font-size="15" font-weight="bold">{scenario}: rejection rate by statistic</text>"#,
        margin_left
    ));
    svg.push('\n');

    // Legend.
    let mut legend_x = margin_left;
    for (series, &effect) in effects.iter().enumerate() {
        let color = COLORS[series % COLORS.len()];
        svg.push_str(&marker(series, legend_x, 34.0, color));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="38" font-family="monospace" font-size="12">effect {effect}</text>"#,
            legend_x + 9.0
        ));
        svg.push('\n');
        legend_x += 110.0;
    }

    // Grid and x-axis labels.
    let bottom = margin_top + row_height * stats.len() as f64;
    for tick in 0..=4 {
        let power = f64::from(tick) / 4.0;
        let x = x_of(power);
        svg.push_str(&format!(
            r##"<line x1="{x:.2}" y1="{margin_top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#cccccc" stroke-width="1"/>"##
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">{power}</text>"#,
            bottom + 18.0
        ));
        svg.push('\n');
    }
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">power</text>"#,
        x_of(0.5),
        bottom + 36.0
    ));
    svg.push('\n');

    // Row labels and guide lines.
    for (slot, stat) in stats.iter().enumerate() {
        let y = y_of(slot);
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{stat}</text>"#,
            margin_left - 8.0,
            y + 4.0
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<line x1="{margin_left:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#eeeeee" stroke-width="1"/>"##,
            x_of(1.0)
        ));
        svg.push('\n');
    }

    // Markers.
    for row in rows {
        let slot = stats.iter().position(|s| s == &row.statistic).unwrap();
        let series = effects.iter().position(|&e| e == row.effect).unwrap();
        let color = COLORS[series % COLORS.len()];
        svg.push_str(&marker(series, x_of(row.power), y_of(slot), color));
        svg.push('\n');
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "scenario,statistic,effect,replications,rejections,power,mc_se,seed\n\
demo,sd,0,100,4,0.04,0.0196,7\n\
demo,sd,0.5,100,93,0.93,0.0255,7\n\
demo,goeman,0,100,5,0.05,0.0218,7\n\
demo,goeman,0.5,100,90,0.9,0.03,7\n";

    #[test]
    fn parse_and_group() {
        let rows = parse_power_csv(SAMPLE).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(scenario_ids(&rows), vec!["demo".to_string()]);
    }

    #[test]
    fn rendering_is_deterministic_and_well_formed() {
        let rows = parse_power_csv(SAMPLE).unwrap();
        let a = render_scenario("demo", &rows);
        let b = render_scenario("demo", &rows);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("sd"));
        assert!(a.contains("effect 0.5"));
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_power_csv("nope\n1,2\n").is_err());
    }
}
