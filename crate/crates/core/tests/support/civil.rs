//! Independent civil-calendar oracle: epoch milliseconds to proleptic
//! Gregorian (year, month, day) via the classic days-from-era algorithm,
//! with no date library involved.

pub fn civil_from_millis(ms: u64) -> (i32, u8, u8) {
    civil_from_days((ms / 86_400_000) as i64)
}

fn civil_from_days(z: i64) -> (i32, u8, u8) {
    let z = z + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097; // [0, 146096]
    let yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365; // [0, 399]
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100); // [0, 365]
    let mp = (5 * doy + 2) / 153; // [0, 11]
    let day = (doy - (153 * mp + 2) / 5 + 1) as u8;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u8;
    let mut year = yoe + era * 400;
    if month <= 2 {
        year += 1;
    }
    (year as i32, month, day)
}
