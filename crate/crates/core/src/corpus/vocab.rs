//! Vocabulary construction and the term/id/frequency dump format.

use super::{CleanTweet, Vocabulary, RESERVED_IDS};
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

/// Words must occur at least this often to be indexed.
pub const MIN_WORD_FREQ: u64 = 2;
/// Hashtags must occur strictly more often than this to be indexed.
pub const MAX_RARE_HASHTAG_FREQ: u64 = 5;

fn ordered_entries(counts: HashMap<String, u64>, keep: impl Fn(&str, u64) -> bool) -> Vec<(String, u32, u64)> {
    let mut kept: Vec<(String, u64)> = counts.into_iter().filter(|(t, n)| keep(t, *n)).collect();
    // Dump order doubles as id order: descending frequency, then lexicographic.
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    kept.into_iter()
        .enumerate()
        .map(|(i, (term, n))| (term, RESERVED_IDS + i as u32, n))
        .collect()
}

/// Build word and hashtag vocabularies over a cleaned corpus.
///
/// Words with corpus frequency 1 and non-ASCII terms are excluded; hashtags
/// with frequency five or fewer are excluded. An empty corpus yields empty
/// indices and zero max lengths.
pub fn build_vocabulary(clean_tweets: &[CleanTweet]) -> Vocabulary {
    let mut word_counts: HashMap<String, u64> = HashMap::new();
    let mut tag_counts: HashMap<String, u64> = HashMap::new();
    let mut max_tweet_len = 0usize;
    let mut max_hashtag_len = 0usize;

    for tweet in clean_tweets {
        max_tweet_len = max_tweet_len.max(tweet.tokens.len());
        max_hashtag_len = max_hashtag_len.max(tweet.hashtags.len());
        for token in &tweet.tokens {
            *word_counts.entry(token.clone()).or_insert(0) += 1;
        }
        for tag in &tweet.hashtags {
            *tag_counts.entry(tag.clone()).or_insert(0) += 1;
        }
    }

    let word_entries = ordered_entries(word_counts, |t, n| t.is_ascii() && n >= MIN_WORD_FREQ);
    let hashtag_entries = ordered_entries(tag_counts, |_, n| n > MAX_RARE_HASHTAG_FREQ);

    let word_index = word_entries.iter().map(|(t, id, _)| (t.clone(), *id)).collect();
    let hashtag_index = hashtag_entries.iter().map(|(t, id, _)| (t.clone(), *id)).collect();

    Vocabulary {
        word_index,
        hashtag_index,
        max_tweet_len,
        max_hashtag_len,
        word_entries,
        hashtag_entries,
    }
}

/// Write a `term<TAB>id<TAB>frequency` dump, one entry per line, in the
/// deterministic vocabulary order. Lines starting with `#` are metadata.
pub fn write_vocab_dump(
    path: &Path,
    entries: &[(String, u32, u64)],
    header: Option<&str>,
) -> Result<()> {
    let mut out = Vec::new();
    if let Some(h) = header {
        writeln!(out, "# {h}").unwrap();
    }
    for (term, id, freq) in entries {
        writeln!(out, "{term}\t{id}\t{freq}").unwrap();
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Read a vocabulary dump written by [`write_vocab_dump`].
pub fn read_vocab_dump(path: &Path) -> Result<Vec<(String, u32, u64)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (term, id, freq) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(t), Some(i), Some(f), None) => (t, i, f),
            _ => return Err(Error::parse(path, lineno + 1, "expected term<TAB>id<TAB>frequency")),
        };
        let id: u32 = id
            .parse()
            .map_err(|_| Error::parse(path, lineno + 1, format!("bad id `{id}`")))?;
        let freq: u64 = freq
            .parse()
            .map_err(|_| Error::parse(path, lineno + 1, format!("bad frequency `{freq}`")))?;
        entries.push((term.to_string(), id, freq));
    }
    Ok(entries)
}
