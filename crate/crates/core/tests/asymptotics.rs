use gelfand_core::asymptotics::{
    clau_selector, diagram, radial_candidates, sweep_p, DiagramParams, FigureKind,
};
use gelfand_core::pradial::IvpControls;
use gelfand_core::radial1::{KindTag, RadialKind};
use gelfand_core::Nonlinearity;

#[test]
fn gap_within_bounds_envelope() {
    for dim in 1..=3 {
        let report = sweep_p(
            dim,
            &Nonlinearity::Exponential,
            &[2.0, 1.5, 1.2, 1.1],
            0.5,
            &IvpControls::default(),
        )
        .unwrap();
        for row in &report.rows {
            assert!(row.error.is_none(), "{row:?}");
            let p = row.p;
            let scaled = (p / std::f64::consts::E).powf(p - 1.0);
            let g = gelfand_core::specfun::g_factor(p, dim).unwrap();
            let envelope = dim as f64 * (1.0 - scaled).max(scaled * g - 1.0);
            assert!(
                row.gap <= envelope * (1.0 + 1e-9),
                "N={dim} p={p}: {} > {envelope}",
                row.gap
            );
            assert!((row.envelope - envelope).abs() < 1e-9);
        }
    }
}

#[test]
fn two_bounded_candidates_satisfy_clau() {
    let model = Nonlinearity::Exponential;
    let rhos: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    for (dim, lambda) in [(2, 0.3), (2, 1.5), (3, 1.0), (3, 2.5), (5, 3.0)] {
        let cands = radial_candidates(dim, &model, lambda, &rhos).unwrap();
        let report = clau_selector(dim, &model, lambda, &cands).unwrap();
        let bounded: Vec<KindTag> = report
            .satisfied
            .iter()
            .map(|e| e.kind.tag())
            .filter(|t| *t != KindTag::Unbounded)
            .collect();
        assert_eq!(
            bounded,
            [KindTag::Trivial, KindTag::Constant],
            "N={dim} lambda={lambda}"
        );
        assert!(report
            .violated
            .iter()
            .all(|e| matches!(e.kind, RadialKind::Discontinuous { .. })));
    }
}

#[test]
fn figure_data_is_reproducible() {
    let ctl = IvpControls::default();
    for kind in [
        FigureKind::Fig1,
        FigureKind::Fig2,
        FigureKind::Fig3,
        FigureKind::Fig4,
    ] {
        let mut params = DiagramParams::defaults(kind);
        params.points = 80;
        let a = diagram(kind, &params, &ctl).unwrap();
        let b = diagram(kind, &params, &ctl).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_svg(), b.to_svg());
    }
}
