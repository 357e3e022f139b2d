use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<F: FnOnce(&Bound<'_, PyModule>)>(f: F) {
    Python::attach(|py| {
        let m = PyModule::new(py, "sysmap").unwrap();
        sysmap::register(&m).unwrap();
        f(&m);
    });
}

#[test]
fn matrix_round_trip_and_spectral_dict() {
    with_module(|m| {
        let base = m
            .getattr("transition_matrix_base")
            .unwrap()
            .call1((2, 3, 4))
            .unwrap();
        let dim: usize = base.getattr("dim").unwrap().extract().unwrap();
        assert_eq!(dim, 7);
        let enc = m
            .getattr("spectral_radius")
            .unwrap()
            .call1((&base,))
            .unwrap();
        let upper: f64 = enc.get_item("upper").unwrap().extract().unwrap();
        assert!(upper <= 73.0);
        let text: String = base.call_method0("to_json").unwrap().extract().unwrap();
        let back = m
            .getattr("Matrix")
            .unwrap()
            .call_method1("from_json", (text,))
            .unwrap();
        assert!(back.eq(&base).unwrap());
    });
}

#[test]
fn bad_ray_raises_precondition_error() {
    with_module(|m| {
        let err = m
            .getattr("cover_invariants")
            .unwrap()
            .call1((2, 4, 3))
            .unwrap_err();
        let py = m.py();
        assert!(err.is_instance(
            py,
            &m.getattr("PreconditionError").unwrap().cast_into().unwrap()
        ));
    });
}
