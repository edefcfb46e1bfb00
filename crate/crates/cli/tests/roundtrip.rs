use bcs_gap::{GapProblem, Grid, MaterialParams, QuadratureConfig, SolverConfig};
use bcs_gap_cli::output::{parse_sweep_csv, write_sweep, Format, SweepDocument};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_reproduces_the_sweep(lambda in 0.15f64..0.8, omega in 0.5f64..50.0, n in 2usize..30) {
        let p = GapProblem::new(
            MaterialParams::new(lambda, omega, 0.086_173_332_62).unwrap(),
            SolverConfig::default(),
            QuadratureConfig::default(),
        )
        .unwrap();
        let result = p.sweep(&Grid::Chebyshev(n)).unwrap();
        let doc = SweepDocument::new(&result);
        let mut buf = Vec::new();
        write_sweep(&mut buf, &doc, Format::Csv).unwrap();
        let parsed = parse_sweep_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(&parsed, &doc.points);
        for (row, point) in parsed.iter().zip(&result.points) {
            prop_assert_eq!(row.f.to_bits(), point.f.to_bits());
            prop_assert_eq!(row.t.to_bits(), point.temperature.to_bits());
        }
    }

    #[test]
    fn any_float_survives_text(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = bcs_gap_cli::output::fmt_f64(x);
        prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
