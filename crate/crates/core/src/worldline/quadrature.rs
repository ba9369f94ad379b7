//! Gauss–Legendre rules and composite rules graded toward breakpoints.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per panel.
pub const PANEL_ORDER: usize = 16;
/// Width ratio between neighbouring panels of a graded run.
pub const GRADING: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `[−1, 1]`, nodes by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 16-point table.
    pub fn panel() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
    }

    fn push_panel(&self, a: f64, b: f64, rule: &mut Rule) {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            rule.x.push(mid + half * x);
            rule.w.push(half * w);
        }
    }
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Flattened nodes and weights of a composite rule.
#[derive(Clone, Debug, Default)]
pub struct Rule {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.x.iter().zip(&self.w).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Composite rule on `[breaks[0], breaks[last]]`. Every segment between two
/// consecutive breakpoints is halved and each half is cut into panels that
/// shrink geometrically toward its breakpoint, so integrable endpoint
/// singularities (logs, `x ln x`, kinks) are resolved.
///
/// `nodes` sets the grading depth: with `nodes = 16·2^k` each half gets
/// `2k + 6` levels, so the smallest panel is `4^{−(2k+6)}` of the half width.
/// `min_scale`, if positive, forces enough levels that the smallest
/// panel is below it.
pub fn graded_rule(breaks: &[f64], nodes: usize, min_scale: f64) -> Rule {
    let gl = GaussLegendre::panel();
    let segments: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).filter(|(a, b)| b > a).collect();
    let mut rule = Rule::default();
    if segments.is_empty() {
        return rule;
    }
    // Depth grows with the budget: two extra levels (a factor 16 in the
    // smallest panel) per doubling of `nodes`.
    let doublings = (nodes.max(PANEL_ORDER) / PANEL_ORDER).ilog2() as usize;
    let base_levels = 2 * doublings + 6;
    for (a, b) in segments {
        let h = (b - a) / 2.0;
        let mut levels = base_levels;
        if min_scale > 0.0 && h > min_scale {
            let need = ((h / min_scale).ln() / (1.0 / GRADING).ln()).ceil() as usize;
            levels = levels.max(need);
        }
        let cuts: Vec<f64> = (0..=levels).rev().map(|k| h * GRADING.powi(k as i32)).collect();
        // Left half toward a.
        gl.push_panel(a, a + cuts[0], &mut rule);
        for pair in cuts.windows(2) {
            gl.push_panel(a + pair[0], a + pair[1], &mut rule);
        }
        // Right half toward b.
        for pair in cuts.windows(2).rev() {
            gl.push_panel(b - pair[1], b - pair[0], &mut rule);
        }
        gl.push_panel(b - cuts[0], b, &mut rule);
    }
    rule
}

/// Sorted, deduplicated breakpoints: the interval ends plus every interior
/// point of `extra` strictly inside `(lo, hi)`.
pub fn breakpoints(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut out = vec![lo, hi];
    let span = hi - lo;
    out.extend(
        extra
            .iter()
            .copied()
            .filter(|&x| x > lo + 1e-14 * span && x < hi - 1e-14 * span),
    );
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * span);
    out
}

/// Polynomial extrapolation to `ε = 0` through the points `(ε_i, v_i)`.
pub fn richardson_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    assert_eq!(eps.len(), values.len());
    let mut total = 0.0;
    for (i, (&ei, &vi)) in eps.iter().zip(values).enumerate() {
        let mut weight = 1.0;
        for (j, &ej) in eps.iter().enumerate() {
            if j != i {
                weight *= ej / (ej - ei);
            }
        }
        total += weight * vi;
    }
    total
}
