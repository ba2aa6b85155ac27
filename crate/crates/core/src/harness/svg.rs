use crate::persistence::PersistenceDiagram;

const SIZE: f64 = 360.0;
const MARGIN: f64 = 50.0;
const INF_GAP: f64 = 24.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// Birth/death scatter over the diagram's label range; essential classes sit on a row above.
pub fn diagram_svg(diagram: &PersistenceDiagram) -> String {
    let labels = diagram.labels();
    let lo = labels.iter().copied().min().unwrap_or(0) as f64;
    let hi = labels.iter().copied().max().unwrap_or(0) as f64;
    let span = (hi - lo).max(1.0);
    let sx = |v: f64| MARGIN + (v - lo) / span * SIZE;
    let sy = |v: f64| MARGIN + SIZE - (v - lo) / span * SIZE;
    let inf_y = MARGIN - INF_GAP;
    let total = SIZE + 2.0 * MARGIN;

    let mut s = String::new();
    let mut w = |line: String| s.push_str(&line);
    w(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total}\" height=\"{total}\" viewBox=\"0 0 {total} {total}\">\n"
    ));
    w("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n".into());
    w(format!(
        "<rect class=\"axes\" x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    w(format!(
        "<line class=\"diagonal\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\"/>\n",
        sx(lo),
        sy(lo),
        sx(lo + span),
        sy(lo + span)
    ));
    w(format!(
        "<line class=\"infinity\" x1=\"{MARGIN}\" y1=\"{inf_y}\" x2=\"{:.2}\" y2=\"{inf_y}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
        MARGIN + SIZE
    ));
    w(format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">inf</text>\n",
        MARGIN - 30.0,
        inf_y + 4.0
    ));
    for (v, anchor) in [(lo, "start"), (lo + span, "end")] {
        w(format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"{anchor}\">{v}</text>\n",
            sx(v),
            MARGIN + SIZE + 16.0
        ));
    }
    w(format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">birth</text>\n",
        MARGIN + SIZE / 2.0,
        MARGIN + SIZE + 36.0
    ));
    for p in diagram.labeled() {
        let cx = sx(p.birth as f64);
        let cy = p.death.map_or(inf_y, |d| sy(d as f64));
        let death = p.death.map_or("inf".to_string(), |d| d.to_string());
        let color = COLORS.get(p.dim as usize).copied().unwrap_or("black");
        w(format!(
            "<circle class=\"dim{}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.7\" data-birth=\"{}\" data-death=\"{death}\"/>\n",
            p.dim, p.birth
        ));
    }
    w("</svg>\n".into());
    s
}
