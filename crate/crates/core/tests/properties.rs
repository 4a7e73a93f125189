use casimir_pws::exact::{
    exact_atom_plate, exact_plate_plate, fresnel_bulk, slab_reflection_exact, Polarization, WaveParams,
};
use casimir_pws::materials::{alpha_from_eps_cm, eps_from_alpha_cm, MaterialModel, Response};
use casimir_pws::output::{write_csv, write_json, Row};
use casimir_pws::pws::{
    atom_slab_thickness_factor, pws_atom_plate, pws_atom_slab, pws_plate_plate, pws_slab_slab,
    slab_slab_thickness_factor,
};
use casimir_pws::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn lorentz(eps0: f64, u_res: f64) -> MaterialModel {
    MaterialModel::new(Response::LorentzEps { eps0, u_res }, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pws_atom_slab_is_attractive_and_decays(eps0 in 1.01f64..1e3, u_res in 0.1f64..10.0, l in 0.1f64..10.0, e in 0.01f64..10.0) {
        let m = lorentz(eps0, u_res);
        let near = pws_atom_slab(&m, &m, l, e, &cfg()).unwrap().value;
        let far = pws_atom_slab(&m, &m, 1.5 * l, e, &cfg()).unwrap().value;
        let plate = pws_atom_plate(&m, &m, l, &cfg()).unwrap().value;
        prop_assert!(near < 0.0);
        prop_assert!(far > near);
        prop_assert!(plate <= near * (1.0 - 1e-12));
    }

    #[test]
    fn pws_is_bilinear_in_density(a0 in 0.01f64..10.0, na in 0.01f64..5.0, nb in 0.01f64..5.0, l in 0.2f64..5.0, e in 0.1f64..3.0) {
        let m = |n: f64| MaterialModel::new(Response::StaticAlpha { a0 }, n).unwrap();
        let unit = pws_slab_slab(&m(1.0), &m(1.0), l, e, e, &cfg()).unwrap().value;
        let scaled = pws_slab_slab(&m(na), &m(nb), l, e, e, &cfg()).unwrap().value;
        prop_assert!((scaled / (na * nb * unit) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn static_thickness_factors_match_closed_forms(eps0 in 1.01f64..1e4, l in 0.2f64..5.0, e in 0.05f64..20.0) {
        let m = MaterialModel::static_eps(eps0).unwrap();
        let slab = pws_atom_slab(&m, &m, l, e, &cfg()).unwrap().value;
        let plate = pws_atom_plate(&m, &m, l, &cfg()).unwrap().value;
        prop_assert!((slab / plate / atom_slab_thickness_factor(e / l) - 1.0).abs() < 1e-8);
        let slabs = pws_slab_slab(&m, &m, l, e, 2.0 * e, &cfg()).unwrap().value;
        let plates = pws_plate_plate(&m, &m, l, &cfg()).unwrap().value;
        prop_assert!((slabs / plates / slab_slab_thickness_factor(e / l, 2.0 * e / l) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn thickness_factors_grow_to_one(e in 1e-3f64..1e3, f in 1e-3f64..1e3) {
        let a = atom_slab_thickness_factor(e);
        prop_assert!(a > 0.0 && a < 1.0);
        prop_assert!(atom_slab_thickness_factor(1.1 * e) > a);
        let s = slab_slab_thickness_factor(e, f);
        prop_assert!(s > 0.0 && s < 1.0);
        prop_assert!(slab_slab_thickness_factor(1.1 * e, f) > s);
        prop_assert!((s - slab_slab_thickness_factor(f, e)).abs() < 1e-15);
    }

    #[test]
    fn reflection_coefficients_are_bounded(eps in 1.0f64..1e8, u in 0.0f64..10.0, extra in 0.0f64..10.0, e in 1e-4f64..10.0) {
        let w = WaveParams::new(u, u + extra + 1e-9).unwrap();
        for p in Polarization::BOTH {
            let bulk = fresnel_bulk(eps, w, p);
            let slab = slab_reflection_exact(eps, w, e, p);
            prop_assert!((-1.0..=0.0).contains(&bulk), "{p:?} bulk {bulk}");
            prop_assert!(slab.abs() <= 1.0, "{p:?} slab {slab}");
            prop_assert!(slab.abs() <= bulk.abs() + 1e-12);
        }
    }

    #[test]
    fn static_ratios_do_not_depend_on_distance(eps0 in 1.05f64..500.0) {
        let m = MaterialModel::static_eps(eps0).unwrap();
        let ratio = |l: f64| -> (f64, f64) {
            let ap = pws_atom_plate(&m, &m, l, &cfg()).unwrap().value / exact_atom_plate(&m, &m, l, &cfg()).unwrap().value;
            let pp = pws_plate_plate(&m, &m, l, &cfg()).unwrap().value / exact_plate_plate(&m, &m, l, &cfg()).unwrap().value;
            (ap, pp)
        };
        let (a1, p1) = ratio(1.0);
        let (a7, p7) = ratio(7.0);
        prop_assert!((a1 / a7 - 1.0).abs() < 1e-8);
        prop_assert!((p1 / p7 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn clausius_mossotti_round_trip(eps in 1.0f64..1e6, n in 1e-3f64..1e3) {
        let a = alpha_from_eps_cm(eps, n).unwrap();
        let back = eps_from_alpha_cm(a, n).unwrap();
        prop_assert!((back / eps - 1.0).abs() < 1e-9 * eps.max(1.0));
    }

    #[test]
    fn emitted_numbers_keep_twelve_digits(value in -1e30f64..1e30, ratio in proptest::option::of(0.0f64..10.0)) {
        let row = Row {
            geometry: "plate-plate".into(),
            eps0: Some(2.5),
            e_rel: None,
            l_over_r: None,
            method: "pws".into(),
            l: Some(1.0),
            value: Some(value),
            ratio,
            quad_error: None,
            converged: true,
        };
        let mut json = Vec::new();
        write_json(std::slice::from_ref(&row), &mut json).unwrap();
        let back: Vec<Row> = serde_json::from_slice(&json).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 5e-12 * b.abs();
        prop_assert!(close(back[0].value.unwrap(), value));
        prop_assert_eq!(back[0].ratio.is_none(), ratio.is_none());
        let mut csv = Vec::new();
        write_csv(&[row], &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let cell: f64 = text.lines().nth(1).unwrap().split(',').nth(6).unwrap().parse().unwrap();
        prop_assert!(close(cell, value));
        prop_assert_eq!(cell, back[0].value.unwrap());
    }
}
