//! Date and time parsing. Without a format, ISO 8601; with a format, a
//! strptime-style pattern over a fixed directive subset. Fields absent from
//! the pattern default to 1900-01-01 00:00:00.

use chrono::format::{parse, Parsed, StrftimeItems};
use chrono::{NaiveDate, NaiveTime};

/// Directives accepted in `fmt` parameters.
pub const DIRECTIVES: &[char] = &['Y', 'm', 'd', 'H', 'M', 'S', 'f', 'z', 'j', 'a', 'b', '%'];

/// Checks a format string against the supported directive subset.
pub fn check_format(fmt: &str) -> Result<(), String> {
    let mut chars = fmt.chars();
    while let Some(c) = chars.next() {
        if c != '%' {
            continue;
        }
        match chars.next() {
            Some(d) if DIRECTIVES.contains(&d) => {}
            Some(d) => return Err(format!("unsupported directive %{d} in format {fmt:?}")),
            None => return Err(format!("dangling '%' in format {fmt:?}")),
        }
    }
    Ok(())
}

/// `%f` means up to microseconds; chrono spells the six-digit form `%6f`.
fn translate(fmt: &str) -> String {
    fmt.replace("%%", "\u{0}")
        .replace("%f", "%6f")
        .replace('\u{0}', "%%")
}

fn parse_fields(text: &str, fmt: &str) -> Result<Parsed, String> {
    let mut parsed = Parsed::new();
    let pattern = translate(fmt);
    parse(&mut parsed, text, StrftimeItems::new(&pattern))
        .map_err(|e| format!("{text:?} does not match format {fmt:?}: {e}"))?;
    Ok(parsed)
}

pub fn parse_date(text: &str, fmt: Option<&str>) -> Result<NaiveDate, String> {
    match fmt {
        None => NaiveDate::parse_from_str(text, "%Y-%m-%d")
            .map_err(|e| format!("{text:?} is not an ISO 8601 date (YYYY-MM-DD): {e}")),
        Some(fmt) => {
            let p = parse_fields(text, fmt)?;
            let year = p.year().unwrap_or(1900);
            let date = match (p.ordinal(), p.month(), p.day()) {
                (Some(ord), None, None) => NaiveDate::from_yo_opt(year, ord),
                (_, m, d) => NaiveDate::from_ymd_opt(year, m.unwrap_or(1), d.unwrap_or(1)),
            };
            date.ok_or_else(|| format!("{text:?} is not a valid calendar date"))
        }
    }
}

pub fn parse_time(text: &str, fmt: Option<&str>) -> Result<NaiveTime, String> {
    match fmt {
        None => ["%H:%M:%S%.f", "%H:%M"]
            .iter()
            .find_map(|f| NaiveTime::parse_from_str(text, f).ok())
            .ok_or_else(|| format!("{text:?} is not an ISO 8601 time (HH:MM[:SS[.fff]])")),
        Some(fmt) => {
            let p = parse_fields(text, fmt)?;
            let hour = p.hour_div_12().unwrap_or(0) * 12 + p.hour_mod_12().unwrap_or(0);
            NaiveTime::from_hms_nano_opt(
                hour,
                p.minute().unwrap_or(0),
                p.second().unwrap_or(0),
                p.nanosecond().unwrap_or(0),
            )
            .ok_or_else(|| format!("{text:?} is not a valid time of day"))
        }
    }
}
