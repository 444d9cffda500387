use crate::braid::{toric_pattern, QuasitoricPattern};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 9] =
    ["unknot", "trefoil", "figure-eight", "torus-2-5", "torus-3-7", "star-10-3", "star-10-2", "star-9-3", "hopf"];

pub fn preset(name: &str) -> Result<QuasitoricPattern> {
    match name {
        "unknot" => QuasitoricPattern::from_ints(2, 1, &[&[1]]),
        "trefoil" => QuasitoricPattern::from_ints(2, 5, &[&[1], &[1], &[1], &[1], &[-1]]),
        "figure-eight" => QuasitoricPattern::from_ints(3, 2, &[&[1, -1], &[1, -1]]),
        "torus-2-5" => toric_pattern(2, 5),
        "torus-3-7" => toric_pattern(3, 7),
        "star-10-3" => toric_pattern(3, 10),
        "star-10-2" => toric_pattern(2, 10),
        "star-9-3" => toric_pattern(3, 9),
        "hopf" => QuasitoricPattern::from_ints(2, 2, &[&[1], &[1]]),
        _ => Err(Error::Domain(format!("unknown preset {name:?}"))),
    }
}

/// One line per preset: the pattern type, padding, signs and closure type.
pub fn describe(name: &str) -> Result<String> {
    let p = preset(name)?;
    let (k, n) = (p.strands(), p.repetitions());
    let padded = p.pad_to_min_repetitions();
    let mut s = match p.component_count() {
        1 => format!("{name}: ({k},{n})"),
        c => format!("{name}: {c}-component link, ({k},{n})"),
    };
    if padded.repetitions() != n {
        s.push_str(&format!(" padded to ({k},{})", padded.repetitions()));
    }
    let rows: Vec<String> = p
        .sign_rows()
        .iter()
        .map(|r| r.iter().map(|x| if x.as_i64() > 0 { '+' } else { '-' }).collect())
        .collect();
    s.push_str(&format!(", signs [{}]", rows.join(" ")));
    Ok(s)
}

pub fn listing() -> String {
    PRESET_NAMES.iter().map(|n| describe(n).expect("presets are valid") + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_has_nine_lines() {
        assert_eq!(listing().lines().count(), 9);
    }

    #[test]
    fn figure_eight_line() {
        assert!(listing().contains("figure-eight: (3,2) padded to (3,8)"));
    }

    #[test]
    fn star_9_3_is_three_component() {
        assert!(listing().contains("star-9-3: 3-component link"));
    }

    #[test]
    fn closure_components() {
        let expect = [1, 1, 1, 1, 1, 1, 2, 3, 2];
        for (name, c) in PRESET_NAMES.iter().zip(expect) {
            assert_eq!(preset(name).unwrap().component_count(), c, "{name}");
        }
    }
}
