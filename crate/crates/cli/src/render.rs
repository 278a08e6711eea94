//! Chart renderers: ASCII grid and static SVG 1.1, both with the standard
//! Adams-chart axes (x = stem t − s, y = filtration s). Cells iterate in
//! chart order, so identical charts render identically.

use quivex::linalg::presented::Orders;
use quivex::quiver::ext::ExtChart;

/// Compact group descriptor: `Z`/`Z^r` for free summands and `p^e` factors
/// for torsion, joined with `+`; the trivial group renders as `.`.
pub fn cell_label(orders: &Orders, p: u32) -> String {
    let free = orders.0.iter().filter(|&&e| e == 0).count();
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for &e in orders.0.iter().filter(|&&e| e > 0) {
        parts.push(u64::from(p).pow(e).to_string());
    }
    if parts.is_empty() {
        ".".to_string()
    } else {
        parts.join("+")
    }
}

fn stem_range(chart: &ExtChart) -> (i64, i64) {
    if chart.entries.is_empty() {
        return (0, chart.t_max.max(0));
    }
    let mut lo = 0;
    let mut hi = 0;
    for &(s, t) in chart.entries.keys() {
        let stem = t - i64::from(s);
        lo = lo.min(stem);
        hi = hi.max(stem);
    }
    (lo, hi)
}

/// Plain-text grid; rows are filtrations from `max_s` down to 0, columns
/// are stems.
pub fn ascii(chart: &ExtChart) -> String {
    let (lo, hi) = stem_range(chart);
    let ncols = (hi - lo + 1) as usize;
    let mut cells = vec![vec![".".to_string(); ncols]; chart.max_s as usize + 1];
    for (&(s, t), o) in &chart.entries {
        let stem = t - i64::from(s);
        cells[s as usize][(stem - lo) as usize] = cell_label(o, chart.p);
    }
    let mut widths = vec![1usize; ncols];
    for (c, w) in widths.iter_mut().enumerate() {
        *w = (lo + c as i64).to_string().len();
        for row in &cells {
            *w = (*w).max(row[c].len());
        }
    }
    let s_width = chart.max_s.to_string().len();
    let mut out = String::new();
    for s in (0..=chart.max_s as usize).rev() {
        out.push_str(&format!("{:>s_width$} |", s));
        for (c, w) in widths.iter().enumerate() {
            out.push_str(&format!(" {:>w$}", cells[s][c]));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:>s_width$} +", ""));
    for w in &widths {
        out.push_str(&"-".repeat(w + 1));
    }
    out.push('\n');
    out.push_str(&format!("{:>s_width$}  ", ""));
    for (c, w) in widths.iter().enumerate() {
        out.push_str(&format!(" {:>w$}", lo + c as i64));
    }
    out.push('\n');
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static SVG 1.1 document: one labelled dot per nonzero cell on a light
/// grid, axes annotated with stem and filtration numbers.
pub fn svg(chart: &ExtChart) -> String {
    let (lo, hi) = stem_range(chart);
    let ncols = (hi - lo + 1) as i64;
    let nrows = i64::from(chart.max_s) + 1;
    let cell = 44i64;
    let margin = 40i64;
    let width = margin * 2 + ncols * cell;
    let height = margin * 2 + nrows * cell;
    let x_of = |stem: i64| margin + (stem - lo) * cell + cell / 2;
    let y_of = |s: i64| height - margin - s * cell - cell / 2;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    out.push_str("  <g stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for c in 0..=ncols {
        let x = margin + c * cell;
        out.push_str(&format!(
            "    <line x1=\"{x}\" y1=\"{margin}\" x2=\"{x}\" y2=\"{}\"/>\n",
            height - margin
        ));
    }
    for r in 0..=nrows {
        let y = margin + r * cell;
        out.push_str(&format!(
            "    <line x1=\"{margin}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>\n",
            width - margin
        ));
    }
    out.push_str("  </g>\n");
    out.push_str("  <g font-family=\"monospace\" font-size=\"12\" fill=\"#555555\" text-anchor=\"middle\">\n");
    for stem in lo..=hi {
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\">{stem}</text>\n",
            x_of(stem),
            height - margin + 18
        ));
    }
    for s in 0..nrows {
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\">{s}</text>\n",
            margin - 16,
            y_of(s) + 4
        ));
    }
    out.push_str("  </g>\n");
    out.push_str("  <g font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">\n");
    for (&(s, t), o) in &chart.entries {
        let stem = t - i64::from(s);
        let (x, y) = (x_of(stem), y_of(i64::from(s)));
        out.push_str(&format!(
            "    <circle cx=\"{x}\" cy=\"{}\" r=\"3\" fill=\"#1f3d99\"/>\n",
            y - 8
        ));
        out.push_str(&format!(
            "    <text x=\"{x}\" y=\"{}\">{}</text>\n",
            y + 10,
            xml_escape(&cell_label(o, chart.p))
        ));
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
