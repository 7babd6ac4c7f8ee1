//! Adaptive Gauss-Kronrod (10/21) quadrature, plus a variant that removes
//! algebraic endpoint singularities by a power substitution.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980145902,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let err = ((kron - gauss) * h).abs();
    (kron * h, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Integrate `f` over `[a, b]` until the estimated error is below
/// `max(abs_tol, rel_tol·|I|)` or 4000 subintervals are in use.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0, intervals: 0 };
    }
    let (v, e) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    while err > abs_tol.max(rel_tol * total.abs()) && heap.len() < 4000 {
        let p = heap.pop().expect("heap is never empty here");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a.min(p.b) || m >= p.a.max(p.b) {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&f, p.a, m);
        let (v2, e2) = gk21(&f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    // re-sum to shed accumulated rounding from the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Quad { value, error, intervals: heap.len() }
}

/// Integrate over `[a, b]` with `x = a + s^pl` on the left half and
/// `x = b − s^pr` on the right half. Powers of 1 mean no substitution; a power
/// `p` absorbs endpoint behaviour down to `|x − edge|^{1/p − 1}`.
pub fn integrate_edges(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    pl: f64,
    pr: f64,
    abs_tol: f64,
) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let h = 0.5 * (b - a);
    let left = integrate(
        |s: f64| {
            let x = a + s.powf(pl);
            f(x) * pl * s.powf(pl - 1.0)
        },
        0.0,
        h.powf(1.0 / pl),
        0.5 * abs_tol,
        1e-13,
    );
    let right = integrate(
        |s: f64| {
            let x = b - s.powf(pr);
            f(x) * pr * s.powf(pr - 1.0)
        },
        0.0,
        h.powf(1.0 / pr),
        0.5 * abs_tol,
        1e-13,
    );
    left.value + right.value
}
