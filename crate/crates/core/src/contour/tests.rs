use proptest::prelude::*;

use super::geometry::{hausdorff, is_convex, Point};
use super::*;
use crate::distributions::{Distribution, Normal, Weibull3};
use crate::joint::{
    build_paper_model, independent_weibull, registered_models, rosenblatt_forward,
    ConditionalFamily, DependenceFunction, Hierarchical, JointModel, Model, Support,
};
use crate::sampling::{empirical_quantile, sample};
use crate::stats::DegreesOfFreedom;
use crate::test_oracle as oracle;

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

fn sea_state() -> Model {
    build_paper_model("sea-state").unwrap()
}

fn hs_marginal() -> Weibull3 {
    Weibull3::new(2.776, 1.471, 0.8888).unwrap()
}

fn independent_normals() -> Model {
    Hierarchical::new(
        Normal::new(0.0, 1.0).unwrap().into(),
        ConditionalFamily::Normal {
            mean: DependenceFunction::Constant { c: 0.0 },
            std: DependenceFunction::Constant { c: 1.0 },
        },
        Support { x1: (-9.0, 9.0), x2: (-9.0, 9.0) },
        [AxisLabel::new("z1", "-"), AxisLabel::new("z2", "-")],
    )
    .unwrap()
    .into()
}

const FIFTY_YEARS: f64 = 6.845e-6;

#[test]
fn iform_upper_hs_is_marginal_quantile() {
    let m = sea_state();
    let spec = ExceedanceSpec::from_return_period(ExceedanceKind::Marginal, 50.0, 3.0).unwrap();
    let c = iform_contour(&m, &spec, RosenblattOrder::X1First, DEFAULT_POINTS).unwrap();
    let b = contour_bounds(&c);
    let x = hs_marginal().isf(spec.alpha().value());
    assert!((b.upper[0] / x - 1.0).abs() < 1e-9, "{} vs {x}", b.upper[0]);
    assert!(c.is_simple());
    assert!(matches!(c.meta, ContourMeta::Rosenblatt { n_points: 360, .. }));
}

#[test]
fn iform_points_lie_on_u_space_circle() {
    let m = sea_state();
    let spec = ExceedanceSpec::marginal(FIFTY_YEARS).unwrap();
    let beta = oracle::normal_isf(FIFTY_YEARS);
    for order in [RosenblattOrder::X1First, RosenblattOrder::X2First] {
        let c = iform_contour(&m, &spec, order, 90).unwrap();
        for x in c.points() {
            let u = rosenblatt_forward(&m, *x, order).unwrap();
            let r = u[0].hypot(u[1]);
            assert!((r - beta).abs() < 1e-8, "{order}: |u| = {r}, beta = {beta}");
        }
    }
}

#[test]
fn mixture_pair_orders_are_mirror_images() {
    let m = build_paper_model("normal-mixture").unwrap();
    let spec = ExceedanceSpec::marginal(1e-3).unwrap();
    let a = iform_contour(&m, &spec, RosenblattOrder::X1First, 120).unwrap();
    let b = iform_contour(&m, &spec, RosenblattOrder::X2First, 120).unwrap();
    for (x, y) in a.points().iter().zip(b.points()) {
        assert!((x[0] - y[1]).abs() < 1e-7 && (x[1] - y[0]).abs() < 1e-7, "{x:?} vs {y:?}");
    }
    // Each contour on its own is not symmetric about the diagonal.
    let (ba, bb) = (contour_bounds(&a), contour_bounds(&b));
    assert!((ba.upper[0] - ba.upper[1]).abs() > 1e-2);
    assert!((ba.upper[0] - bb.upper[1]).abs() < 1e-7);
}

#[test]
fn isorm_upper_hs_is_quantile_at_marginal_alpha() {
    let m = sea_state();
    let spec = ExceedanceSpec::total(FIFTY_YEARS).unwrap();
    let c = isorm_contour(&m, &spec, RosenblattOrder::X1First, DEFAULT_POINTS).unwrap();
    let am = oracle::normal_sf(oracle::chi2_isf(2, FIFTY_YEARS).sqrt());
    assert!((am / 5.39e-7 - 1.0).abs() < 0.01);
    let x = hs_marginal().isf(am);
    assert!((contour_bounds(&c).upper[0] / x - 1.0).abs() < 1e-8);
}

#[test]
fn isorm_over_marginal_quantile_for_weibull_shapes() {
    let spec = ExceedanceSpec::total(FIFTY_YEARS).unwrap();
    for (k, want) in [(1.0, 1.21), (2.0, 1.10)] {
        let m: Model = independent_weibull(k, false).unwrap().into();
        let c = isorm_contour(&m, &spec, RosenblattOrder::X1First, 72).unwrap();
        let x50 = Weibull3::new(1.0, k, 0.0).unwrap().isf(FIFTY_YEARS);
        let ratio = contour_bounds(&c).upper[0] / x50;
        assert!((ratio / want - 1.0).abs() < 0.01, "k = {k}: {ratio}");
    }
}

#[test]
fn wrong_kind_is_rejected() {
    let m = sea_state();
    let total = ExceedanceSpec::total(1e-3).unwrap();
    let marginal = ExceedanceSpec::marginal(1e-3).unwrap();
    assert!(matches!(
        iform_contour(&m, &total, RosenblattOrder::X1First, 36),
        Err(Error::SpecKindMismatch { .. })
    ));
    assert!(matches!(
        isorm_contour(&m, &marginal, RosenblattOrder::X1First, 36),
        Err(Error::SpecKindMismatch { .. })
    ));
    assert!(matches!(
        hd_contour(&m, &marginal, &GridSpec::square(50)),
        Err(Error::SpecKindMismatch { .. })
    ));
    let half = ExceedanceSpec::marginal(0.5).unwrap();
    assert!(matches!(
        iform_contour(&m, &half, RosenblattOrder::X1First, 36),
        Err(Error::DegenerateContour { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn iform_inside_isorm(
        log_a in -7.0f64..-1.0,
        which in 0usize..3,
        x2_first in any::<bool>(),
    ) {
        let name = ["sea-state", "weibull-normal", "normal-mixture"][which];
        let m = build_paper_model(name).unwrap();
        let a = 10f64.powf(log_a);
        let order = if x2_first { RosenblattOrder::X2First } else { RosenblattOrder::X1First };
        let inner = iform_contour(&m, &ExceedanceSpec::marginal(a).unwrap(), order, 120).unwrap();
        let outer = isorm_contour(&m, &ExceedanceSpec::total(a).unwrap(), order, 120).unwrap();
        prop_assert!(outer.is_simple());
        for x in inner.points() {
            prop_assert!(outer.contains(*x), "{name}: {x:?} outside ISORM");
        }
    }
}

#[test]
fn ds_on_independent_normals_is_the_iform_circle() {
    let m = independent_normals();
    let n = 1_000_000;
    let a = 1e-2;
    let spec = ExceedanceSpec::marginal(a).unwrap();
    let r = oracle::normal_isf(a);
    let se = (a * (1.0 - a) / n as f64).sqrt() / oracle::phi_density(r);
    let circle = iform_contour(&m, &spec, RosenblattOrder::X1First, 3600).unwrap();
    for seed in [1, 2, 3] {
        let s = sample(&m, "normal", n, seed).unwrap();
        let c = ds_contour(&s, &spec, &equal_angles(DEFAULT_POINTS)).unwrap();
        assert!(is_convex(c.points()));
        let d = hausdorff(c.points(), circle.points());
        assert!(d <= 3.0 * se, "seed {seed}: Hausdorff {d}, se {se}");
    }
}

#[test]
fn ds_offset_at_zero_angle_is_marginal_quantile() {
    let s = sample(&sea_state(), "sea-state", 50_000, 11).unwrap();
    let alphas = [p(1e-2), p(2e-3)];
    let off = halfplane_offsets(&s.points, &equal_angles(8), &alphas).unwrap();
    let x1: Vec<f64> = s.points.iter().map(|q| q[0]).collect();
    let x2: Vec<f64> = s.points.iter().map(|q| q[1]).collect();
    for (a, row) in alphas.iter().zip(&off) {
        assert_eq!(row[0], empirical_quantile(&x1, *a).unwrap());
        // 90 degrees projects onto x2 up to rounding of cos(π/2).
        assert!((row[2] - empirical_quantile(&x2, *a).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn ds_contours_are_convex_and_nested() {
    let s = sample(&sea_state(), "sea-state", 400_000, 4).unwrap();
    let specs: Vec<ExceedanceSpec> =
        [1e-2, 1e-3, 2.5e-4].iter().map(|a| ExceedanceSpec::marginal(*a).unwrap()).collect();
    let cs = ds_contours(&s, &specs, &equal_angles(DEFAULT_POINTS)).unwrap();
    for c in &cs {
        assert!(is_convex(c.points()), "alpha {}", c.spec.alpha().value());
        assert!(c.is_simple());
    }
    for pair in cs.windows(2) {
        assert!(pair[0].points().iter().all(|x| pair[1].contains(*x)));
    }
    let one = ds_contour(&s, &specs[1], &equal_angles(DEFAULT_POINTS)).unwrap();
    assert_eq!(one.components, cs[1].components);
}

#[test]
fn ds_input_errors() {
    let s = sample(&sea_state(), "sea-state", 10_000, 1).unwrap();
    let angles = equal_angles(36);
    let tiny = ExceedanceSpec::marginal(1e-3).unwrap();
    assert!(matches!(
        ds_contour(&s, &tiny, &angles),
        Err(Error::InsufficientSample { needed: 100_000, got: 10_000 })
    ));
    let total = ExceedanceSpec::total(1e-2).unwrap();
    assert!(matches!(ds_contour(&s, &total, &angles), Err(Error::SpecKindMismatch { .. })));
    let ok = ExceedanceSpec::marginal(1e-2).unwrap();
    // Angles spanning less than a half-turn leave the region open.
    let narrow: Vec<f64> = (0..10).map(|i| 0.1 * i as f64).collect();
    assert!(ds_contour(&s, &ok, &narrow).is_err());
    assert!(ds_contour(&s, &ok, &angles[..2]).is_err());
}

#[test]
fn hd_interval_of_symmetric_density_splits_alpha() {
    let d: Distribution = Normal::new(1.0, 2.0).unwrap().into();
    for a in [1e-1, 1e-3, 1e-6] {
        let (lo, hi) = hd_interval_1d(&d, p(a)).unwrap();
        let x = 1.0 + 2.0 * oracle::normal_isf(a / 2.0);
        assert!((hi - x).abs() < 1e-8 && (lo - (2.0 - x)).abs() < 1e-8, "{a}: ({lo}, {hi})");
    }
}

#[test]
fn hd_interval_of_exponential_is_the_marginal_quantile() {
    let w = Weibull3::new(1.5, 1.0, 0.3).unwrap();
    let d: Distribution = w.into();
    for a in [0.2, 1e-2, 1e-4, 1e-8] {
        let (lo, hi) = hd_interval_1d(&d, p(a)).unwrap();
        assert_eq!(lo, 0.3);
        assert!((hi / w.isf(a) - 1.0).abs() < 1e-10, "{a}: {hi}");
    }
    // A mode above the lower end splits the tail mass between both sides.
    let w3: Distribution = Weibull3::new(1.0, 3.0, 0.0).unwrap().into();
    let (lo, hi) = hd_interval_1d(&w3, p(1e-3)).unwrap();
    assert!(lo > 0.0 && (w3.pdf(lo) / w3.pdf(hi) - 1.0).abs() < 1e-6);
    assert!(((w3.cdf(lo) + w3.sf(hi)) / 1e-3 - 1.0).abs() < 1e-8);
    assert!(hi > w3.isf(1e-3));
}

#[test]
fn hd_of_exponential_times_uniform_is_the_quantile_line() {
    let m: Model = independent_weibull(1.0, true).unwrap().into();
    let bounds = Support { x1: (-0.5, 12.0), x2: (-3.5, 3.5) };
    let grid = GridSpec::square(1000).with_bounds(bounds);
    let dx = 12.5 / 999.0;
    let g = DensityGrid::new(&m, &grid).unwrap();
    for a in [1e-2, 1e-3] {
        let c = g.contour(&ExceedanceSpec::total(a).unwrap()).unwrap();
        let b = contour_bounds(&c);
        let x = (1.0 / a).ln();
        assert!((b.upper[0] - x).abs() < dx, "{a}: {} vs {x}", b.upper[0]);
        // The right edge of the region is vertical.
        let right: Vec<&Point> = c.points().iter().filter(|q| q[0] > x - 2.0 * dx).collect();
        assert!(right.iter().filter(|q| q[1].abs() < 2.95).all(|q| (q[0] - x).abs() < dx));
        assert!(right.iter().any(|q| q[1] > 2.9) && right.iter().any(|q| q[1] < -2.9));
    }
}

/// P(f(X) < c) for the independent Weibull(1, k) × N(0, 1) pair.
fn weibull_normal_excluded(k: f64, c: f64) -> f64 {
    let w = Weibull3::new(1.0, k, 0.0).unwrap();
    let tail = |x: f64| {
        let fw = w.pdf(x);
        if fw <= 0.0 {
            return 0.0;
        }
        let ratio = c * (std::f64::consts::TAU).sqrt() / fw;
        let out = if ratio >= 1.0 { 1.0 } else { 2.0 * oracle::normal_sf((-2.0 * ratio.ln()).sqrt()) };
        fw * out
    };
    oracle::simpson(tail, 0.0, 8.0, 200_000)
}

#[test]
fn hd_threshold_matches_independent_oracle() {
    let k = 2.0;
    let m: Model = independent_weibull(k, false).unwrap().into();
    let grid = GridSpec::square(1000).with_bounds(Support { x1: (0.0, 6.0), x2: (-7.0, 7.0) });
    let g = DensityGrid::new(&m, &grid).unwrap();
    for a in [1e-2, 1e-4] {
        let c = g.contour(&ExceedanceSpec::total(a).unwrap()).unwrap();
        let ContourMeta::HighestDensity { f_c, excluded_probability, enclosed_probability, .. } = c.meta
        else {
            panic!("wrong meta")
        };
        assert!((excluded_probability / a - 1.0).abs() < 1e-3, "{excluded_probability}");
        assert!((enclosed_probability - (1.0 - a)).abs() < 1e-5, "{enclosed_probability}");
        let truth = weibull_normal_excluded(k, f_c);
        assert!((truth / a - 1.0).abs() < 5e-3, "alpha {a}: oracle {truth}");
    }
}

#[test]
fn hd_region_holds_every_high_density_node() {
    let m = build_paper_model("weibull-normal").unwrap();
    let grid = GridSpec::square(400);
    let g = DensityGrid::new(&m, &grid).unwrap();
    let c = g.contour(&ExceedanceSpec::total(1e-3).unwrap()).unwrap();
    let ContourMeta::HighestDensity { f_c, .. } = c.meta else { panic!("wrong meta") };
    let s = m.support();
    let index = c.index();
    let mut above = 0;
    for i in 0..400 {
        for j in 0..400 {
            let x = [
                s.x1.0 + (s.x1.1 - s.x1.0) * i as f64 / 399.0,
                s.x2.0 + (s.x2.1 - s.x2.0) * j as f64 / 399.0,
            ];
            let f = m.pdf(x);
            if f > f_c * 1.01 {
                above += 1;
                assert!(index.contains(x), "{x:?} has density {f} > {f_c}");
            } else if f < f_c * 0.99 {
                assert!(!index.contains(x), "{x:?} has density {f} < {f_c}");
            }
        }
    }
    assert!(above > 1000);
    assert!(c.is_simple());
}

#[test]
fn hd_mixture_pair_is_disconnected_at_small_alpha_only() {
    let m = build_paper_model("normal-mixture").unwrap();
    let g = DensityGrid::new(&m, &GridSpec::square(400)).unwrap();
    let wide = g.contour(&ExceedanceSpec::total(1e-1).unwrap()).unwrap();
    let tight = g.contour(&ExceedanceSpec::total(1e-4).unwrap()).unwrap();
    assert_eq!(wide.components.len(), 2);
    assert_eq!(tight.components.len(), 1);
    assert!(!wide.contains([0.0, 0.0]) && wide.contains([3.0, 3.0]) && wide.contains([-3.0, -3.0]));
}

#[test]
fn hd_upper_bounds_dominate_marginal_quantiles() {
    for name in registered_models() {
        let m = build_paper_model(name).unwrap();
        let g = DensityGrid::new(&m, &GridSpec::default()).unwrap();
        for a in [1e-2, 1e-4, 1e-6] {
            let c = g.contour(&ExceedanceSpec::total(a).unwrap()).unwrap();
            let b = contour_bounds(&c);
            for axis in 0..2 {
                let x = m.marginal_isf(axis, a).unwrap();
                let cell = (m.support().axis(axis).1 - m.support().axis(axis).0) / 999.0;
                assert!(b.upper[axis] >= x - cell, "{name} axis {axis} alpha {a}: {} < {x}", b.upper[axis]);
            }
        }
    }
}

#[test]
fn bounds_of_a_circle() {
    let ring: Vec<Point> = equal_angles(360).iter().map(|t| [1.0 + 2.0 * t.cos(), -1.0 + 2.0 * t.sin()]).collect();
    let c = Contour::new(
        Method::Iform,
        ExceedanceSpec::marginal(1e-2).unwrap(),
        [AxisLabel::new("a", "m"), AxisLabel::new("b", "-")],
        vec![ring],
        ContourMeta::Imported,
    )
    .unwrap();
    let b = contour_bounds(&c);
    assert_eq!(b.upper, [3.0, 1.0]);
    assert_eq!(b.lower, [-1.0, -3.0]);
    assert_eq!(b.upper_at[0], [3.0, -1.0]);
    assert!(b.lower.iter().zip(&b.upper).all(|(l, u)| l <= u));
}

#[test]
fn contour_rejects_bad_rings() {
    let spec = ExceedanceSpec::marginal(1e-2).unwrap();
    let labels = [AxisLabel::new("a", "-"), AxisLabel::new("b", "-")];
    let short = vec![vec![[0.0, 0.0], [1.0, 0.0]]];
    assert!(Contour::new(Method::Ds, spec, labels.clone(), short, ContourMeta::Imported).is_err());
    let nan = vec![vec![[0.0, 0.0], [1.0, f64::NAN], [0.0, 1.0]]];
    assert!(Contour::new(Method::Ds, spec, labels, nan, ContourMeta::Imported).is_err());
}

#[test]
fn csv_and_json_round_trip() {
    let m = sea_state();
    let spec = ExceedanceSpec::from_return_period(ExceedanceKind::Marginal, 50.0, 3.0).unwrap();
    let c = iform_contour(&m, &spec, RosenblattOrder::X1First, 36).unwrap();
    let text = c.to_csv_string();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# method,alpha_kind,alpha,x1_label,x2_label"));
    assert!(lines.next().unwrap().starts_with("# IFORM,marginal,"));
    let back = Contour::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.method, Method::Iform);
    assert_eq!(back.spec.kind(), ExceedanceKind::Marginal);
    assert_eq!(back.labels, c.labels);
    assert_eq!(back.components.len(), 1);
    for (a, b) in back.points().iter().zip(c.points()) {
        assert!((a[0] - b[0]).abs() <= 1e-12 * b[0].abs() && (a[1] - b[1]).abs() <= 1e-12 * b[1].abs());
    }
    let json = c.to_json().unwrap();
    assert!(json.contains("\"order\""));
    assert_eq!(Contour::from_json(&json).unwrap(), c);
}

#[test]
fn empirical_alpha_of_inner_sample_is_zero() {
    let m = independent_normals();
    let c = isorm_contour(&m, &ExceedanceSpec::total(1e-6).unwrap(), RosenblattOrder::X1First, 360).unwrap();
    let s = sample(&m, "normal", 1000, 9).unwrap();
    let e = empirical_total_alpha(&c, &s).unwrap();
    assert_eq!((e.outside, e.alpha.value(), e.standard_error), (0, 0.0, 0.0));
}

#[test]
fn empirical_alpha_of_iform_matches_chi2_relation() {
    let m = independent_normals();
    let n = 1_000_000;
    let s = sample(&m, "normal", n, 21).unwrap();
    for a in [1e-1, 1e-2, 1e-3] {
        let c = iform_contour(&m, &ExceedanceSpec::marginal(a).unwrap(), RosenblattOrder::X1First, 720)
            .unwrap();
        let e = empirical_total_alpha(&c, &s).unwrap();
        let exact = oracle::chi2_sf(2, oracle::normal_isf(a).powi(2));
        let via_api = iform_total_alpha(p(a), DegreesOfFreedom::new(2).unwrap()).unwrap().value();
        assert!((via_api / exact - 1.0).abs() < 1e-10);
        assert!((e.alpha.value() - exact).abs() < 3.0 * e.standard_error, "{a}: {:?} vs {exact}", e);
    }
}

#[test]
fn method_names_round_trip() {
    for m in [Method::Iform, Method::Isorm, Method::Ds, Method::Hd] {
        assert_eq!(m.name().parse::<Method>().unwrap(), m);
    }
    assert_eq!(Method::Isorm.required_kind(), ExceedanceKind::Total);
    assert!("sorm".parse::<Method>().is_err());
}
