//! Compiled-in data: the class-number-one table, ingested torsion tables
//! for congruence-subgroup abelianizations, exceptional quadratic fields
//! for small modular curves, and torsion-bound constants.

/// Iteration cap for continued-fraction searches.
pub const UNIT_SEARCH_CAP: u64 = 1_000_000;

/// Real squarefree d <= 200 with h(Q(sqrt d)) = 1, verified against an
/// independent reduced-indefinite-form cycle count (see the oracle test).
pub const CLASS_NUMBER_ONE_REAL: &[i64] = &[
    2, 3, 5, 6, 7, 11, 13, 14, 17, 19, 21, 22, 23, 29, 31, 33, 37, 38, 41, 43, 46, 47, 53, 57,
    59, 61, 62, 67, 69, 71, 73, 77, 83, 86, 89, 93, 94, 97, 101, 103, 107, 109, 113, 118, 127,
    129, 131, 133, 134, 137, 139, 141, 149, 151, 157, 158, 161, 163, 166, 167, 173, 177, 179,
    181, 191, 193, 197, 199,
];

/// The nine imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE_IMAGINARY: &[i64] = &[-1, -2, -3, -7, -11, -19, -43, -67, -163];

pub fn has_class_number_one(d: i64) -> bool {
    if d > 0 {
        CLASS_NUMBER_ONE_REAL.contains(&d)
    } else {
        CLASS_NUMBER_ONE_IMAGINARY.contains(&d)
    }
}

/// Quadratic fields carrying non-cuspidal quadratic points on X0(N), for
/// the N used by the irreducibility criteria at p = 7, 11, 13, 17.
/// Sources: Bruin-Najman 2015 (Table 4) for X0(28); Ozman-Siksek 2019
/// (Tables 8.1, 8.4, 8.7) for X0(34), X0(44), X0(52).
pub struct ModularCurvePoints {
    pub p: u64,
    pub curve_level: u64,
    pub exceptional_d: &'static [i64],
    pub source: &'static str,
}

pub const MODULAR_CURVE_TABLE: &[ModularCurvePoints] = &[
    ModularCurvePoints {
        p: 7,
        curve_level: 28,
        exceptional_d: &[-3, -7, -23],
        source: "Bruin-Najman 2015, Table 4",
    },
    ModularCurvePoints {
        p: 11,
        curve_level: 44,
        exceptional_d: &[-7],
        source: "Ozman-Siksek 2019, Table 8.4",
    },
    ModularCurvePoints {
        p: 13,
        curve_level: 52,
        exceptional_d: &[-1, -3],
        source: "Ozman-Siksek 2019, Table 8.7",
    },
    ModularCurvePoints {
        p: 17,
        curve_level: 34,
        exceptional_d: &[-1, -2, -15],
        source: "Ozman-Siksek 2019, Table 8.1",
    },
];

/// Largest prime order of a torsion point on an elliptic curve over a
/// quadratic field (Kamienny 1992).
pub const TORSION_BOUND_QUADRATIC: u64 = 13;

/// Largest prime torsion order over quartic fields (Derickx-Kamienny-
/// Stein-Stoll 2023).
pub const TORSION_BOUND_QUARTIC: u64 = 17;

/// Primes l with nontrivial l-torsion in the abelianization of the
/// congruence subgroup at the relevant level, per imaginary field.
/// Ingested data (computed externally with the Bianchi-groups machinery);
/// the largest entry is the field's lifting threshold p_K.
pub struct TorsionTable {
    pub d: i64,
    pub primes: &'static [&'static str],
}

pub const GAMMA0_TORSION: &[TorsionTable] = &[
    TorsionTable {
        d: -3,
        primes: &["2", "3"],
    },
    TorsionTable {
        d: -11,
        primes: &["2", "3"],
    },
    TorsionTable {
        d: -19,
        primes: &["2", "3", "5", "17", "173", "199"],
    },
    TorsionTable {
        d: -43,
        primes: &[
            "2", "3", "5", "7", "11", "13", "17", "19", "29", "37", "43", "47", "59", "61", "79",
            "107", "127", "139", "277", "307", "389", "613", "1031", "1523", "1823", "3019",
            "4657", "12659", "74821", "77681", "87583", "237581", "944659", "2180587", "3854969",
            "34315907",
        ],
    },
    TorsionTable {
        d: -67,
        primes: &[
            "2", "3", "5", "7", "11", "13", "19", "29", "37", "41", "43", "59", "67", "101",
            "109", "163", "179", "359", "431", "673", "991", "1481", "2521", "4793", "5639",
            "23057", "32909", "48973", "138197", "286381", "1833259", "8827739", "22349783",
            "79626517", "104306779", "119593911", "68867906617", "20888200728617",
            "763282887386969", "6221169664900085761", "11132872059238913129",
            "1212294248161911603264861232147", "3323488887264568865776816914360851",
        ],
    },
];

pub fn torsion_primes(d: i64) -> Option<&'static [&'static str]> {
    GAMMA0_TORSION.iter().find(|t| t.d == d).map(|t| t.primes)
}
