//! Randomized invariants.

use std::f64::consts::PI;

use proptest::prelude::*;
use reeb_lab::config::{Preset, Tolerances};
use reeb_lab::index::{cz_index, winding_number};
use reeb_lab::knots::{linking_number, ClosedCurve};
use reeb_lab::leaves::{cap_f2, profile_rhs, solve_xbar};
use reeb_lab::path::SymplecticPath;
use reeb_lab::plot::contour_segments;
use reeb_lab::State4;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_rhs_has_sign_of_minus_q(eps in 0.05f64..0.6, u in 0.001f64..0.999) {
        let p = Preset::Validated.params(eps);
        let (xp, xm) = solve_xbar(&p, 2.0 * eps).unwrap();
        let g = xm + (xp - xm) * u;
        prop_assume!(cap_f2(&p, g) > 1e-9);
        let q = p.q(g, 0.0);
        prop_assume!(q.abs() > 1e-12);
        let rhs = profile_rhs(&p, g).unwrap();
        prop_assert_eq!(rhs.signum(), -q.signum());
    }

    #[test]
    fn rotation_path_index(theta in -3.4f64..3.4) {
        let frac = theta - theta.floor();
        prop_assume!(frac > 1e-3 && frac < 1.0 - 1e-3);
        let path = SymplecticPath::rotation(512, theta);
        let w = winding_number(&path, &nalgebra::Vector2::new(0.3, -0.8)).unwrap();
        prop_assert!((w - theta).abs() < 1e-9);
        let cz = cz_index(&path, 0, 1e-6).unwrap();
        prop_assert_eq!(cz.mu_local, 2 * theta.floor() as i64 + 1);
    }

    #[test]
    fn linking_is_antisymmetric_under_reversal(r in 0.3f64..0.95, phase in 0.0f64..6.0, seed in 0u64..16) {
        let n = 256;
        let s = (1.0 - r * r).sqrt();
        let a = ClosedCurve::from_loop((0..n).map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            State4::new(r * t.cos(), r * t.sin(), s * (t + phase).cos(), s * (t + phase).sin())
        }).collect());
        let b = ClosedCurve::from_loop((0..n).map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            State4::new(s * t.cos(), -s * t.sin(), r * t.cos(), r * t.sin())
        }).collect());
        let tol = Tolerances::default();
        let (Ok(l), Ok(lr)) = (linking_number(&a, &b, seed, &tol), linking_number(&a.reversed(), &b, seed, &tol)) else {
            return Ok(());
        };
        prop_assert!((l.raw + lr.raw).abs() < 1e-6);
    }

    #[test]
    fn contour_points_lie_on_ellipse(a in 0.5f64..1.5, b in 0.5f64..1.5, level in 0.2f64..0.9) {
        let f = move |x: f64, y: f64| (x / a).powi(2) + (y / b).powi(2);
        let segs = contour_segments(&f, 2.0, 160, level);
        prop_assert!(!segs.is_empty());
        for (p, q) in segs {
            for z in [p, q] {
                prop_assert!((f(z.0, z.1) - level).abs() < 0.02);
            }
        }
    }
}
