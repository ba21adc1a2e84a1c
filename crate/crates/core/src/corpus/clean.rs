//! The tweet cleaning pipeline.

use super::{CleanTweet, RawTweet};
use regex::Regex;
use std::sync::OnceLock;

fn url_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // "http://", "https://" or a bare "www." prefix, up to the next whitespace.
    RE.get_or_init(|| Regex::new(r"(?:https?://|www\.)\S*").unwrap())
}

fn hashtag_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"#[A-Za-z0-9_]+").unwrap())
}

fn mention_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"@\S+").unwrap())
}

/// Clean a raw tweet: lowercase, replace URLs with a space, extract hashtags
/// (leading `#` stripped) and drop them from the text together with
/// `@`-mentions, remove punctuation, digits and non-ASCII characters, then
/// whitespace-tokenize. Empty text yields empty token and hashtag lists.
pub fn clean_tweet(raw: &RawTweet) -> CleanTweet {
    let lower = raw.text.to_lowercase();
    let no_urls = url_re().replace_all(&lower, " ");

    let mut hashtags = Vec::new();
    for m in hashtag_re().find_iter(&no_urls) {
        hashtags.push(m.as_str()[1..].to_string());
    }
    let no_tags = hashtag_re().replace_all(&no_urls, " ");
    let no_mentions = mention_re().replace_all(&no_tags, " ");

    // Keep ASCII letters and whitespace; drop everything else in place so
    // that "don't" becomes "dont" rather than splitting into two tokens.
    let letters: String = no_mentions
        .chars()
        .filter(|c| c.is_ascii_lowercase() || c.is_whitespace())
        .collect();

    let tokens = letters.split_whitespace().map(str::to_string).collect();

    CleanTweet {
        tokens,
        hashtags,
        user_id: raw.user_id.clone(),
        timestamp: raw.timestamp,
        label: None,
    }
}

/// Render a cleaned tweet back to text: tokens joined by spaces, followed by
/// the hashtags with their `#` restored. Cleaning the result reproduces the
/// same tokens and hashtags.
pub fn detokenize(tweet: &CleanTweet) -> String {
    let mut parts: Vec<String> = tweet.tokens.clone();
    parts.extend(tweet.hashtags.iter().map(|h| format!("#{h}")));
    parts.join(" ")
}
