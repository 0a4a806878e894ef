//! Published full-scale values for the six report tables, row by row.
//!
//! Percentages and seconds are as printed; every other entry has 5 decimals.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub label: &'static str,
    pub ci_u: (f64, f64),
    pub ci_d: (f64, f64),
    pub rel_err_pct: f64,
    pub rel_err_upper_pct: f64,
    pub fit_seconds: f64,
    pub u_n: f64,
    pub stderr_u: f64,
    pub d_n: f64,
    pub stderr_d: f64,
    pub f_n: f64,
    pub stderr_f: f64,
    pub c_n: f64,
    pub stderr_c: f64,
}

pub fn table(id: u8) -> Option<&'static [ReferenceRow]> {
    match id {
        1 => Some(TABLE_1),
        2 => Some(TABLE_2),
        3 => Some(TABLE_3),
        4 => Some(TABLE_4),
        5 => Some(TABLE_5),
        6 => Some(TABLE_6),
        _ => None,
    }
}

const TABLE_1: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (3.99957, 4.00105), ci_d: (0.99982, 1.0004), rel_err_pct: 77.46, rel_err_upper_pct: 77.47, fit_seconds: 0.1, u_n: 4.00031, stderr_u: 0.00038, d_n: 1.00011, stderr_d: 0.00015, f_n: 3.00033, stderr_f: 0.00023, c_n: 5.00014, stderr_c: 0.00049 },
    ReferenceRow { label: "poly. regr.", ci_u: (0.99979, 1.00002), ci_d: (0.99982, 1.0004), rel_err_pct: 0.25, rel_err_upper_pct: 0.68, fit_seconds: 0.1, u_n: 0.99991, stderr_u: 6e-05, d_n: 1.00011, stderr_d: 0.00015, f_n: 3e-05, stderr_f: 0.00012, c_n: 5.00014, stderr_c: 0.00049 },
    ReferenceRow { label: "NN tanh", ci_u: (0.99986, 1.00009), ci_d: (0.99982, 1.0004), rel_err_pct: 0.45, rel_err_upper_pct: 0.77, fit_seconds: 1332.0, u_n: 0.99998, stderr_u: 6e-05, d_n: 1.00011, stderr_d: 0.00015, f_n: 0.0001, stderr_f: 0.00012, c_n: 5.00014, stderr_c: 0.00049 },
    ReferenceRow { label: "NN ReLU", ci_u: (1.00007, 1.0003), ci_d: (0.99982, 1.0004), rel_err_pct: 0.79, rel_err_upper_pct: 1.01, fit_seconds: 1328.3, u_n: 1.00019, stderr_u: 6e-05, d_n: 1.00011, stderr_d: 0.00015, f_n: 0.00031, stderr_f: 0.00012, c_n: 5.00014, stderr_c: 0.00049 },
    ReferenceRow { label: "NN LSE", ci_u: (0.99988, 1.0001), ci_d: (0.99982, 1.0004), rel_err_pct: 0.47, rel_err_upper_pct: 0.79, fit_seconds: 1483.2, u_n: 0.99999, stderr_u: 6e-05, d_n: 1.00011, stderr_d: 0.00015, f_n: 0.00011, stderr_f: 0.00012, c_n: 5.00014, stderr_c: 0.00049 },
];
const TABLE_2: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (41.5739, 41.58212), ci_d: (36.16566, 36.17592), rel_err_pct: 100.0, rel_err_upper_pct: 100.02, fit_seconds: 0.1, u_n: 41.57801, stderr_u: 0.0021, d_n: 36.17079, stderr_d: 0.00262, f_n: 5.40722, stderr_f: 0.00171, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "lin. regr., add. feature", ci_u: (37.89192, 37.9003), ci_d: (36.16566, 36.17592), rel_err_pct: 56.48, rel_err_upper_pct: 56.52, fit_seconds: 0.1, u_n: 37.89611, stderr_u: 0.00214, d_n: 36.17079, stderr_d: 0.00262, f_n: 1.72471, stderr_f: 0.00172, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "poly. regr.", ci_u: (36.66939, 36.6773), ci_d: (36.16566, 36.17592), rel_err_pct: 30.47, rel_err_upper_pct: 30.55, fit_seconds: 0.2, u_n: 36.67335, stderr_u: 0.00202, d_n: 36.17079, stderr_d: 0.00262, f_n: 0.50198, stderr_f: 0.00168, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "poly. regr., add. feature", ci_u: (36.39638, 36.40441), ci_d: (36.16566, 36.17592), rel_err_pct: 20.58, rel_err_upper_pct: 20.7, fit_seconds: 0.2, u_n: 36.4004, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: 0.22893, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN tanh", ci_u: (36.16812, 36.17617), ci_d: (36.16566, 36.17592), rel_err_pct: 0.9, rel_err_upper_pct: 2.44, fit_seconds: 1410.3, u_n: 36.17214, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: 0.00044, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN tanh, add. feature", ci_u: (36.16801, 36.17606), ci_d: (36.16566, 36.17592), rel_err_pct: 0.75, rel_err_upper_pct: 2.38, fit_seconds: 1440.5, u_n: 36.17204, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: 0.0003, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN ReLU", ci_u: (36.168, 36.17605), ci_d: (36.16566, 36.17592), rel_err_pct: 0.74, rel_err_upper_pct: 2.38, fit_seconds: 1399.0, u_n: 36.17202, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: 0.00029, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN ReLU, add. feature", ci_u: (36.16775, 36.17579), ci_d: (36.16566, 36.17592), rel_err_pct: 0.15, rel_err_upper_pct: 2.27, fit_seconds: 1470.0, u_n: 36.17177, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: 1e-05, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN LSE", ci_u: (36.16757, 36.17562), ci_d: (36.16566, 36.17592), rel_err_pct: -0.49, rel_err_upper_pct: 2.21, fit_seconds: 1579.7, u_n: 36.1716, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: -0.00013, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
    ReferenceRow { label: "NN LSE, add. feature", ci_u: (36.16764, 36.17569), ci_d: (36.16566, 36.17592), rel_err_pct: -0.36, rel_err_upper_pct: 2.24, fit_seconds: 1532.1, u_n: 36.17166, stderr_u: 0.00205, d_n: 36.17079, stderr_d: 0.00262, f_n: -7e-05, stderr_f: 0.00169, c_n: 5.40705, stderr_c: 0.00187 },
];
const TABLE_3: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (39.93194, 39.94025), ci_d: (39.84392, 39.85452), rel_err_pct: 8.75, rel_err_upper_pct: 8.89, fit_seconds: 0.1, u_n: 39.93609, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.08475, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "lin. regr., add. feature", ci_u: (39.92223, 39.93055), ci_d: (39.84392, 39.85452), rel_err_pct: 8.24, rel_err_upper_pct: 8.39, fit_seconds: 0.1, u_n: 39.92639, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.07508, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "poly. regr.", ci_u: (39.85144, 39.85974), ci_d: (39.84392, 39.85452), rel_err_pct: 2.01, rel_err_upper_pct: 2.56, fit_seconds: 0.2, u_n: 39.85559, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00446, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "poly. regr., add. feature", ci_u: (39.85101, 39.8593), ci_d: (39.84392, 39.85452), rel_err_pct: 1.92, rel_err_upper_pct: 2.48, fit_seconds: 0.2, u_n: 39.85515, stderr_u: 0.00211, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00406, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN tanh", ci_u: (39.84711, 39.85541), ci_d: (39.84392, 39.85452), rel_err_pct: 0.33, rel_err_upper_pct: 1.62, fit_seconds: 1373.0, u_n: 39.85126, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00012, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN tanh, add. feature", ci_u: (39.84716, 39.85546), ci_d: (39.84392, 39.85452), rel_err_pct: 0.4, rel_err_upper_pct: 1.63, fit_seconds: 1449.0, u_n: 39.85131, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00018, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN ReLU", ci_u: (39.84717, 39.85547), ci_d: (39.84392, 39.85452), rel_err_pct: 0.41, rel_err_upper_pct: 1.63, fit_seconds: 1390.0, u_n: 39.85132, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00018, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN ReLU, add. feature", ci_u: (39.84724, 39.85554), ci_d: (39.84392, 39.85452), rel_err_pct: 0.48, rel_err_upper_pct: 1.65, fit_seconds: 1411.0, u_n: 39.85139, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00026, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN LSE", ci_u: (39.8471, 39.85541), ci_d: (39.84392, 39.85452), rel_err_pct: 0.32, rel_err_upper_pct: 1.62, fit_seconds: 1515.0, u_n: 39.85125, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00012, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
    ReferenceRow { label: "NN LSE, add. feature", ci_u: (39.84717, 39.85547), ci_d: (39.84392, 39.85452), rel_err_pct: 0.4, rel_err_upper_pct: 1.63, fit_seconds: 1561.0, u_n: 39.85132, stderr_u: 0.00212, d_n: 39.84922, stderr_d: 0.00271, f_n: 0.00018, stderr_f: 0.00169, c_n: 11.05717, stderr_c: 0.00209 },
];
const TABLE_4: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (6.39829, 6.40817), ci_d: (6.39167, 6.40396), rel_err_pct: 4.52, rel_err_upper_pct: 5.06, fit_seconds: 1.6, u_n: 6.40323, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: 0.00552, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "lin. regr., add. feature", ci_u: (6.39771, 6.40759), ci_d: (6.39167, 6.40396), rel_err_pct: 4.27, rel_err_upper_pct: 4.84, fit_seconds: 1.7, u_n: 6.40265, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: 0.00494, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "poly. regr.", ci_u: (6.39556, 6.40542), ci_d: (6.39167, 6.40396), rel_err_pct: 3.22, rel_err_upper_pct: 3.94, fit_seconds: 83.3, u_n: 6.40049, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: 0.0028, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "poly. regr., add. feature", ci_u: (6.39543, 6.40534), ci_d: (6.39167, 6.40396), rel_err_pct: 3.14, rel_err_upper_pct: 3.88, fit_seconds: 89.86, u_n: 6.40038, stderr_u: 0.00253, d_n: 6.39782, stderr_d: 0.00313, f_n: 0.00267, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN tanh", ci_u: (6.39249, 6.40237), ci_d: (6.39167, 6.40396), rel_err_pct: -1.01, rel_err_upper_pct: 2.04, fit_seconds: 1636.3, u_n: 6.39743, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: -0.00028, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN tanh, add. feature", ci_u: (6.39255, 6.40242), ci_d: (6.39167, 6.40396), rel_err_pct: -0.91, rel_err_upper_pct: 2.09, fit_seconds: 1647.5, u_n: 6.39749, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: -0.00023, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN ReLU", ci_u: (6.39288, 6.40276), ci_d: (6.39167, 6.40396), rel_err_pct: 0.6, rel_err_upper_pct: 2.36, fit_seconds: 1620.1, u_n: 6.39782, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: 0.0001, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN ReLU, add. feature", ci_u: (6.39249, 6.40237), ci_d: (6.39167, 6.40396), rel_err_pct: -1.03, rel_err_upper_pct: 2.04, fit_seconds: 1650.5, u_n: 6.39743, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: -0.00029, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN LSE", ci_u: (6.39276, 6.40263), ci_d: (6.39167, 6.40396), rel_err_pct: -0.3, rel_err_upper_pct: 2.26, fit_seconds: 1807.3, u_n: 6.39769, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: -2e-05, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
    ReferenceRow { label: "NN LSE, add. feature", ci_u: (6.3926, 6.40247), ci_d: (6.39167, 6.40396), rel_err_pct: -0.83, rel_err_upper_pct: 2.13, fit_seconds: 1830.9, u_n: 6.39754, stderr_u: 0.00252, d_n: 6.39782, stderr_d: 0.00313, f_n: -0.00018, stderr_f: 0.00086, c_n: 2.70728, stderr_c: 0.00119 },
];
const TABLE_5: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (24.36374, 24.36761), ci_d: (24.33863, 24.36034), rel_err_pct: 2.52, rel_err_upper_pct: 2.9, fit_seconds: 4.8, u_n: 24.36567, stderr_u: 0.00099, d_n: 24.34948, stderr_d: 0.00554, f_n: 0.01644, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "lin. regr., add. feature", ci_u: (24.36276, 24.36666), ci_d: (24.33863, 24.36034), rel_err_pct: 2.45, rel_err_upper_pct: 2.84, fit_seconds: 4.8, u_n: 24.36471, stderr_u: 0.00099, d_n: 24.34948, stderr_d: 0.00554, f_n: 0.01553, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "poly. regr.", ci_u: (24.35346, 24.35739), ci_d: (24.33863, 24.36034), rel_err_pct: 1.56, rel_err_upper_pct: 2.12, fit_seconds: 88.7, u_n: 24.35543, stderr_u: 0.001, d_n: 24.34948, stderr_d: 0.00554, f_n: 0.00631, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "poly. regr., add. feature", ci_u: (24.35187, 24.35583), ci_d: (24.33863, 24.36034), rel_err_pct: 1.37, rel_err_upper_pct: 1.98, fit_seconds: 93.3, u_n: 24.35385, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: 0.00483, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN tanh", ci_u: (24.34708, 24.35103), ci_d: (24.33863, 24.36034), rel_err_pct: -0.12, rel_err_upper_pct: 1.43, fit_seconds: 1622.1, u_n: 24.34906, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: -3e-05, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN tanh, add. feature", ci_u: (24.34615, 24.35011), ci_d: (24.33863, 24.36034), rel_err_pct: -0.58, rel_err_upper_pct: 1.31, fit_seconds: 1642.5, u_n: 24.34813, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: -0.00088, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN ReLU", ci_u: (24.34672, 24.35067), ci_d: (24.33863, 24.36034), rel_err_pct: -0.38, rel_err_upper_pct: 1.38, fit_seconds: 1620.2, u_n: 24.34869, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: -0.00038, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN ReLU, add. feature", ci_u: (24.34605, 24.35001), ci_d: (24.33863, 24.36034), rel_err_pct: -0.61, rel_err_upper_pct: 1.29, fit_seconds: 1634.3, u_n: 24.34803, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: -0.00098, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN LSE", ci_u: (24.34774, 24.35169), ci_d: (24.33863, 24.36034), rel_err_pct: 0.48, rel_err_upper_pct: 1.51, fit_seconds: 1837.4, u_n: 24.34972, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: 0.00059, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
    ReferenceRow { label: "NN LSE, add. feature", ci_u: (24.34626, 24.35022), ci_d: (24.33863, 24.36034), rel_err_pct: -0.55, rel_err_upper_pct: 1.32, fit_seconds: 1832.5, u_n: 24.34824, stderr_u: 0.00101, d_n: 24.34948, stderr_d: 0.00554, f_n: -0.00077, stderr_f: 0.00322, c_n: 25.87654, stderr_c: 0.00565 },
];
const TABLE_6: &[ReferenceRow] = &[
    ReferenceRow { label: "lin. regr.", ci_u: (21.19898, 21.20766), ci_d: (21.1726, 21.19328), rel_err_pct: 2.14, rel_err_upper_pct: 2.36, fit_seconds: 4.9, u_n: 21.20332, stderr_u: 0.00221, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.02149, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "lin. regr., add. feature", ci_u: (21.19584, 21.20468), ci_d: (21.1726, 21.19328), rel_err_pct: 1.98, rel_err_upper_pct: 2.21, fit_seconds: 5.2, u_n: 21.20026, stderr_u: 0.00226, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.01841, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "poly. regr.", ci_u: (21.1919, 21.20076), ci_d: (21.1726, 21.19328), rel_err_pct: 1.76, rel_err_upper_pct: 2.02, fit_seconds: 89.1, u_n: 21.19633, stderr_u: 0.00226, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.01455, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "poly. regr., add. feature", ci_u: (21.18934, 21.1982), ci_d: (21.1726, 21.19328), rel_err_pct: 1.6, rel_err_upper_pct: 1.88, fit_seconds: 91.5, u_n: 21.19377, stderr_u: 0.00226, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.01198, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN tanh", ci_u: (21.18205, 21.19086), ci_d: (21.1726, 21.19328), rel_err_pct: 0.99, rel_err_upper_pct: 1.4, fit_seconds: 1622.1, u_n: 21.18645, stderr_u: 0.00225, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00466, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN tanh, add. feature", ci_u: (21.18185, 21.19064), ci_d: (21.1726, 21.19328), rel_err_pct: 0.97, rel_err_upper_pct: 1.38, fit_seconds: 1642.5, u_n: 21.18624, stderr_u: 0.00224, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00442, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN ReLU", ci_u: (21.18194, 21.19075), ci_d: (21.1726, 21.19328), rel_err_pct: 0.98, rel_err_upper_pct: 1.39, fit_seconds: 1620.2, u_n: 21.18635, stderr_u: 0.00225, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00454, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN ReLU, add. feature", ci_u: (21.18186, 21.19065), ci_d: (21.1726, 21.19328), rel_err_pct: 0.97, rel_err_upper_pct: 1.39, fit_seconds: 1634.3, u_n: 21.18625, stderr_u: 0.00224, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00443, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN LSE", ci_u: (21.18296, 21.19177), ci_d: (21.1726, 21.19328), rel_err_pct: 1.09, rel_err_upper_pct: 1.47, fit_seconds: 1825.2, u_n: 21.18736, stderr_u: 0.00225, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00555, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
    ReferenceRow { label: "NN LSE, add. feature", ci_u: (21.18185, 21.19065), ci_d: (21.1726, 21.19328), rel_err_pct: 0.97, rel_err_upper_pct: 1.38, fit_seconds: 1837.4, u_n: 21.18625, stderr_u: 0.00224, d_n: 21.18294, stderr_d: 0.00528, f_n: 0.00442, stderr_f: 0.00279, c_n: 46.90835, stderr_c: 0.00644 },
];
