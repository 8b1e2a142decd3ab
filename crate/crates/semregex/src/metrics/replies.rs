//! Lenient parsing of evaluator replies. Evaluators are instructed to
//! answer with a bare Python list or dictionary, but models wrap answers
//! in prose or code fences often enough that we extract the first
//! bracket-delimited structure instead of requiring an exact format.

use std::collections::BTreeMap;

/// The first balanced `open`..`close` slice of `text`, respecting
/// double-quoted strings with backslash escapes.
fn first_balanced(text: &str, open: char, close: char) -> Option<&str> {
    let start = text.find(open)?;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (offset, c) in text[start..].char_indices() {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            c if c == open => depth += 1,
            c if c == close => {
                depth -= 1;
                if depth == 0 {
                    return Some(&text[start..start + offset + c.len_utf8()]);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parse the first `[...]` in the reply as a list of 0/1 judgments.
pub fn parse_binary_list(reply: &str) -> Option<Vec<bool>> {
    let body = first_balanced(reply, '[', ']')?;
    let inner = &body[1..body.len() - 1];
    let mut out = Vec::new();
    for part in inner.split(',') {
        match part.trim() {
            "" => continue,
            "0" => out.push(false),
            "1" => out.push(true),
            _ => return None,
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Parse the first `{...}` in the reply as an id → rating mapping with
/// ratings in {0, 1, 2}. Keys may be quoted or bare.
pub fn parse_rating_map(reply: &str) -> Option<BTreeMap<String, u8>> {
    let body = first_balanced(reply, '{', '}')?;
    let inner = body[1..body.len() - 1].trim();
    let mut out = BTreeMap::new();
    if inner.is_empty() {
        return Some(out);
    }
    for entry in inner.split(',') {
        let (key, value) = entry.split_once(':')?;
        let key = key.trim().trim_matches(|c| c == '"' || c == '\'').to_string();
        let rating: u8 = value.trim().parse().ok()?;
        if key.is_empty() || rating > 2 {
            return None;
        }
        out.insert(key, rating);
    }
    Some(out)
}

/// Parse the first `[...]` in the reply as a list of strings (JSON
/// string syntax, which double-quoted Python lists share).
pub fn parse_string_list(reply: &str) -> Option<Vec<String>> {
    let body = first_balanced(reply, '[', ']')?;
    let parsed: Vec<String> = serde_json::from_str(body).ok()?;
    if parsed.is_empty() {
        None
    } else {
        Some(parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_list_with_prose_around_it() {
        assert_eq!(
            parse_binary_list("Sure! Here you go: [1,0,1, 0,1]. Done."),
            Some(vec![true, false, true, false, true])
        );
        assert_eq!(parse_binary_list("[0,0,0,0,0]"), Some(vec![false; 5]));
    }

    #[test]
    fn binary_list_rejects_non_binary_values() {
        assert_eq!(parse_binary_list("[1,2,0]"), None);
        assert_eq!(parse_binary_list("no list at all"), None);
    }

    #[test]
    fn rating_map_quoted_and_bare_keys() {
        let m = parse_rating_map("ratings: {\"14\": 0, \"15\": 2, \"20\": 1}").unwrap();
        assert_eq!(m.get("15"), Some(&2));
        let m = parse_rating_map("{3: 2, 4: 0}").unwrap();
        assert_eq!(m.get("3"), Some(&2));
    }

    #[test]
    fn rating_map_rejects_out_of_scale() {
        assert_eq!(parse_rating_map("{\"1\": 3}"), None);
    }

    #[test]
    fn string_list_handles_brackets_inside_strings() {
        let texts =
            parse_string_list("[\"a [nested] case\", \"plain, with comma\"]").unwrap();
        assert_eq!(texts, vec!["a [nested] case", "plain, with comma"]);
    }

    #[test]
    fn string_list_rejects_garbage() {
        assert_eq!(parse_string_list("nothing here"), None);
        assert_eq!(parse_string_list("[1, 2]"), None);
    }
}
