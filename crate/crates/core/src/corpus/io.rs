//! Dataset file formats.
//!
//! Tweets file: one record per line, tab-separated `tweet_id<TAB>user_id<TAB>
//! timestamp<TAB>text`; tabs, newlines and backslashes inside the text are
//! escaped as `\t`, `\n` and `\\`. Labels file: `tweet_id<TAB>label_name`.
//! Lines starting with `#` are metadata comments in both formats; writers
//! emit one carrying the config hash and seed that produced the file.

use super::{build_vocabulary, clean_tweet, encode_tweet, CleanTweet, Dataset, RawTweet};
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Parse a tweets file into raw records, preserving input order.
pub fn read_tweets_file(path: &Path) -> Result<Vec<RawTweet>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut tweets = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.splitn(4, '\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let timestamp: i64 = fields[2].parse().map_err(|_| {
            Error::parse(path, lineno + 1, format!("bad timestamp `{}`", fields[2]))
        })?;
        if timestamp < 0 {
            return Err(Error::parse(path, lineno + 1, "negative timestamp"));
        }
        let tweet_id = fields[0].to_string();
        if let Some(first) = seen.insert(tweet_id.clone(), lineno + 1) {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("duplicate tweet_id `{tweet_id}` (first seen on line {first})"),
            ));
        }
        tweets.push(RawTweet {
            tweet_id,
            user_id: fields[1].to_string(),
            timestamp,
            text: unescape_text(fields[3]),
        });
    }
    if tweets.is_empty() {
        return Err(Error::parse(path, 0, "no records"));
    }
    Ok(tweets)
}

/// Parse a labels file into (tweet_id, label_name) pairs.
pub fn read_labels_file(path: &Path) -> Result<Vec<(String, String)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut labels = Vec::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected tweet_id<TAB>label_name, found {} fields", fields.len()),
            ));
        }
        labels.push((fields[0].to_string(), fields[1].to_string()));
    }
    Ok(labels)
}

/// Write a tweets file; `header` becomes a leading `#` comment.
pub fn write_tweets_file(path: &Path, tweets: &[RawTweet], header: Option<&str>) -> Result<()> {
    let mut out = Vec::new();
    if let Some(h) = header {
        writeln!(out, "# {h}").unwrap();
    }
    for t in tweets {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            t.tweet_id,
            t.user_id,
            t.timestamp,
            escape_text(&t.text)
        )
        .unwrap();
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Write a labels file; `header` becomes a leading `#` comment.
pub fn write_labels_file(
    path: &Path,
    labels: &[(String, String)],
    header: Option<&str>,
) -> Result<()> {
    let mut out = Vec::new();
    if let Some(h) = header {
        writeln!(out, "# {h}").unwrap();
    }
    for (id, name) in labels {
        writeln!(out, "{id}\t{name}").unwrap();
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Load, clean, encode and temporally sort a dataset.
///
/// Labels are joined on `tweet_id`; a label naming an unknown tweet or an
/// unknown label name is an error. The sort is stable, so equal timestamps
/// keep their input order.
pub fn load_dataset(
    tweets_path: &Path,
    labels_path: Option<&Path>,
    label_set: &[String],
) -> Result<Dataset> {
    let raw = read_tweets_file(tweets_path)?;

    let label_ids: HashMap<&str, usize> = label_set
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i))
        .collect();

    let mut label_by_tweet: HashMap<String, usize> = HashMap::new();
    if let Some(labels_path) = labels_path {
        let known: std::collections::HashSet<&str> =
            raw.iter().map(|t| t.tweet_id.as_str()).collect();
        for (tweet_id, label_name) in read_labels_file(labels_path)? {
            if !known.contains(tweet_id.as_str()) {
                return Err(Error::data(format!(
                    "label references unknown tweet_id `{tweet_id}`"
                )));
            }
            let Some(&label) = label_ids.get(label_name.as_str()) else {
                return Err(Error::data(format!(
                    "label name `{label_name}` is not in the configured label set"
                )));
            };
            label_by_tweet.insert(tweet_id, label);
        }
    }

    let mut cleaned: Vec<(String, CleanTweet)> = raw
        .iter()
        .map(|r| {
            let mut c = clean_tweet(r);
            c.label = label_by_tweet.get(&r.tweet_id).copied();
            (r.tweet_id.clone(), c)
        })
        .collect();
    cleaned.sort_by_key(|(_, c)| c.timestamp);

    let clean_only: Vec<CleanTweet> = cleaned.iter().map(|(_, c)| c.clone()).collect();
    let vocabulary = build_vocabulary(&clean_only);

    let tweets: Vec<_> = cleaned
        .iter()
        .map(|(id, c)| encode_tweet(id, c, &vocabulary))
        .collect();
    let labeled_subset: Vec<usize> = tweets
        .iter()
        .enumerate()
        .filter(|(_, t)| t.label.is_some())
        .map(|(i, _)| i)
        .collect();
    let horizon = (0, tweets.iter().map(|t| t.timestamp).max().unwrap_or(0));

    if label_set.len() < 2 {
        return Err(Error::data("label set must contain at least 2 labels"));
    }

    Ok(Dataset {
        tweets,
        label_set: label_set.to_vec(),
        labeled_subset,
        horizon,
        vocabulary,
    })
}
