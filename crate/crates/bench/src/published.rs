//! Reference rows for the eight benchmark grids (S = K = 100).
//!
//! Tables 1-4 sweep ρ with γ = 0.6, θ = 0.02, η = 0.1, r0 = 0.001.
//! Tables 5-8 sweep η with γ = 0.58, θ = 0.0345, ρ = 0.2, r0 = 0.001.
//! MC prices come from 1e6 full-truncation Euler paths with dt = 1e-3; `mc_ci`
//! is the printed confidence half-width.

pub const RHO_AXIS: [f64; 7] = [-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9];
pub const ETA_AXIS: [f64; 7] = [0.001, 0.02, 0.04, 0.06, 0.08, 0.1, 0.12];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rho,
    Eta,
}

#[derive(Debug, Clone, Copy)]
pub struct PublishedTable {
    pub id: usize,
    pub axis: Axis,
    pub maturity: f64,
    pub sigma: f64,
    pub gamma_rev: f64,
    pub theta: f64,
    /// Rate volatility for ρ-sweeps, correlation for η-sweeps.
    pub fixed: f64,
    pub r0: f64,
    pub mc: [f64; 7],
    pub mc_ci: [f64; 7],
    pub go: [f64; 7],
    pub kk: [f64; 7],
    pub mm: [f64; 7],
}

impl PublishedTable {
    pub fn axis_values(&self) -> [f64; 7] {
        match self.axis {
            Axis::Rho => RHO_AXIS,
            Axis::Eta => ETA_AXIS,
        }
    }

    /// `(rho, eta)` of column `i`.
    pub fn cell(&self, i: usize) -> (f64, f64) {
        match self.axis {
            Axis::Rho => (RHO_AXIS[i], self.fixed),
            Axis::Eta => (self.fixed, ETA_AXIS[i]),
        }
    }
}

pub const TABLES: [PublishedTable; 8] = [
    PublishedTable {
        id: 1,
        axis: Axis::Rho,
        maturity: 1.0,
        sigma: 0.2,
        gamma_rev: 0.6,
        theta: 0.02,
        fixed: 0.1,
        r0: 0.001,
        mc: [8.1543, 8.1799, 8.2055, 8.2314, 8.2574, 8.2832, 8.3085],
        mc_ci: [0.0225, 0.0137, 0.0064, 0.0003, 0.0069, 0.0142, 0.0230],
        go: [8.1192, 8.1568, 8.1943, 8.2315, 8.2686, 8.3055, 8.3423],
        kk: [8.1361, 8.1677, 8.1993, 8.2309, 8.2625, 8.2941, 8.3258],
        mm: [8.146, 8.1745, 8.2029, 8.2313, 8.2595, 8.2877, 8.3157],
    },
    PublishedTable {
        id: 2,
        axis: Axis::Rho,
        maturity: 5.0,
        sigma: 0.2,
        gamma_rev: 0.6,
        theta: 0.02,
        fixed: 0.1,
        r0: 0.001,
        mc: [19.8443, 20.1287, 20.4125, 20.6936, 20.9705, 21.2425, 21.5086],
        mc_ci: [0.0595, 0.0351, 0.0153, 0.0026, 0.0202, 0.0404, 0.0649],
        go: [19.6375, 19.9974, 20.3492, 20.6936, 21.0308, 21.3614, 21.6856],
        kk: [19.7487, 20.0582, 20.3678, 20.6773, 20.9869, 21.2964, 21.606],
        mm: [19.7747, 20.085, 20.3892, 20.6875, 20.981, 21.269, 21.5522],
    },
    PublishedTable {
        id: 3,
        axis: Axis::Rho,
        maturity: 1.0,
        sigma: 0.4,
        gamma_rev: 0.6,
        theta: 0.02,
        fixed: 0.1,
        r0: 0.001,
        mc: [16.0337, 16.0533, 16.073, 16.0933, 16.1141, 16.1351, 16.156],
        mc_ci: [0.0504, 0.0301, 0.0139, 0.0002, 0.0144, 0.0306, 0.0509],
        go: [15.9831, 16.0199, 16.0567, 16.0934, 16.1300, 16.1665, 16.2030],
        kk: [15.9997, 16.0309, 16.062, 16.0932, 16.1243, 16.1555, 16.1866],
        mm: [16.0094, 16.0374, 16.0654, 16.0933, 16.1211, 16.1489, 16.1767],
    },
    PublishedTable {
        id: 4,
        axis: Axis::Rho,
        maturity: 5.0,
        sigma: 0.4,
        gamma_rev: 0.6,
        theta: 0.02,
        fixed: 0.1,
        r0: 0.001,
        mc: [36.1379, 36.3566, 36.5912, 36.8358, 37.0875, 37.3439, 37.6015],
        mc_ci: [0.0405, 0.0102, 0.0141, 0.0008, 0.0163, 0.0324, 0.0571],
        go: [35.8574, 36.1877, 36.5138, 36.8358, 37.154, 37.4683, 37.7789],
        kk: [35.9641, 36.2539, 36.5437, 36.8335, 37.1233, 37.4132, 37.703],
        mm: [35.9876, 36.2725, 36.5543, 36.8329, 37.1089, 37.3819, 37.6520],
    },
    PublishedTable {
        id: 5,
        axis: Axis::Eta,
        maturity: 1.0,
        sigma: 0.2,
        gamma_rev: 0.58,
        theta: 0.0345,
        fixed: 0.2,
        r0: 0.001,
        mc: [8.387, 8.392, 8.3972, 8.4025, 8.4077, 8.4128, 8.4179],
        mc_ci: [0.0044, 0.0045, 0.0045, 0.0046, 0.0047, 0.0047, 0.0048],
        go: [8.39, 8.3963, 8.4029, 8.4095, 8.416, 8.4224, 8.4286],
        kk: [8.3899, 8.3949, 8.4001, 8.4053, 8.4105, 8.4158, 8.421],
        mm: [8.3899, 8.3944, 8.3992, 8.4039, 8.4086, 8.4132, 8.4177],
    },
    PublishedTable {
        id: 6,
        axis: Axis::Eta,
        maturity: 1.0,
        sigma: 0.4,
        gamma_rev: 0.58,
        theta: 0.0345,
        fixed: 0.2,
        r0: 0.001,
        mc: [16.2303, 16.2352, 16.2403, 16.2454, 16.2504, 16.2553, 16.2601],
        mc_ci: [0.0093, 0.0094, 0.0094, 0.0095, 0.0096, 0.0096, 0.0097],
        go: [16.2366, 16.2427, 16.2492, 16.2556, 16.2618, 16.268, 16.2738],
        kk: [16.2365, 16.2414, 16.2466, 16.2517, 16.2569, 16.262, 16.2671],
        mm: [16.2365, 16.2409, 16.2456, 16.2502, 16.2547, 16.2591, 16.2634],
    },
    PublishedTable {
        id: 7,
        axis: Axis::Eta,
        maturity: 5.0,
        sigma: 0.2,
        gamma_rev: 0.58,
        theta: 0.0345,
        fixed: 0.2,
        r0: 0.001,
        mc: [22.8358, 22.8854, 22.9389, 22.9928, 23.0467, 23.0999, 23.1516],
        mc_ci: [0.0122, 0.0128, 0.0135, 0.0142, 0.0150, 0.0157, 0.0164],
        go: [22.8415, 22.9009, 22.9645, 23.0286, 23.0925, 23.1554, 23.2165],
        kk: [22.841, 22.8902, 22.942, 22.9939, 23.0457, 23.0975, 23.1493],
        mm: [22.841, 22.8918, 22.9461, 23.0007, 23.0546, 23.1069, 23.1565],
    },
    PublishedTable {
        id: 8,
        axis: Axis::Eta,
        maturity: 5.0,
        sigma: 0.4,
        gamma_rev: 0.58,
        theta: 0.0345,
        fixed: 0.2,
        r0: 0.001,
        mc: [38.4209, 38.4676, 38.5166, 38.5649, 38.6121, 38.6578, 38.7014],
        mc_ci: [0.0257, 0.0262, 0.0267, 0.0272, 0.0278, 0.0283, 0.0289],
        go: [38.4364, 38.4922, 38.5505, 38.608, 38.6639, 38.7179, 38.7692],
        kk: [38.4359, 38.4828, 38.5321, 38.5815, 38.6309, 38.6802, 38.7296],
        mm: [38.436, 38.4836, 38.5333, 38.582, 38.629, 38.6737, 38.7154],
    },
];

pub fn table(id: usize) -> &'static PublishedTable {
    &TABLES[id - 1]
}
