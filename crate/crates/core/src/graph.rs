//! The directed follow network.
//!
//! Edge-list format: one `follower_id followee_id` pair per line,
//! whitespace-separated; lines starting with `#` are comments. Storage is
//! compressed sparse row over dense user indices, so followee queries cost
//! time linear in out-degree.

use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

/// Directed user-follows-user adjacency with dense user indexing.
#[derive(Debug, Clone, Default)]
pub struct FollowGraph {
    user_index: HashMap<String, u32>,
    user_ids: Vec<String>,
    row_offsets: Vec<usize>,
    /// Sorted, duplicate-free followee indices, concatenated per user.
    followee_ids: Vec<u32>,
}

impl FollowGraph {
    /// Build from (follower, followee) pairs. Duplicate edges collapse;
    /// self-loops are rejected. Users appearing only as followees still get
    /// index entries.
    pub fn from_edges<I>(edges: I) -> Result<FollowGraph>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut user_index: HashMap<String, u32> = HashMap::new();
        let mut user_ids: Vec<String> = Vec::new();
        let intern = |id: String, user_index: &mut HashMap<String, u32>, user_ids: &mut Vec<String>| {
            *user_index.entry(id.clone()).or_insert_with(|| {
                user_ids.push(id);
                (user_ids.len() - 1) as u32
            })
        };

        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (follower, followee) in edges {
            if follower == followee {
                return Err(Error::data(format!("self-loop on user `{follower}`")));
            }
            let u = intern(follower, &mut user_index, &mut user_ids);
            let v = intern(followee, &mut user_index, &mut user_ids);
            pairs.push((u, v));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let n = user_ids.len();
        let mut row_offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            row_offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let followee_ids = pairs.into_iter().map(|(_, v)| v).collect();

        Ok(FollowGraph {
            user_index,
            user_ids,
            row_offsets,
            followee_ids,
        })
    }

    /// Load from an edge-list file.
    pub fn load(edges_path: &Path) -> Result<FollowGraph> {
        let file = std::fs::File::open(edges_path).map_err(|e| Error::io(edges_path, e))?;
        let mut edges = Vec::new();
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(edges_path, e))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (follower, followee) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::parse(
                        edges_path,
                        lineno + 1,
                        "expected `follower_id followee_id`",
                    ))
                }
            };
            if follower == followee {
                return Err(Error::parse(
                    edges_path,
                    lineno + 1,
                    format!("self-loop on user `{follower}`"),
                ));
            }
            edges.push((follower.to_string(), followee.to_string()));
        }
        FollowGraph::from_edges(edges)
    }

    pub fn user_count(&self) -> usize {
        self.user_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.followee_ids.len()
    }

    /// Dense index of a user id, if the user is in the graph.
    pub fn index_of(&self, user: &str) -> Option<u32> {
        self.user_index.get(user).copied()
    }

    /// User id for a dense index.
    pub fn user_id(&self, idx: u32) -> &str {
        &self.user_ids[idx as usize]
    }

    /// Followee indices of a user by dense index: sorted, duplicate-free.
    pub fn followees_by_index(&self, idx: u32) -> &[u32] {
        let idx = idx as usize;
        &self.followee_ids[self.row_offsets[idx]..self.row_offsets[idx + 1]]
    }

    /// Followee user ids of a user, sorted and duplicate-free. Unknown users
    /// are an error.
    pub fn followees(&self, user: &str) -> Result<Vec<&str>> {
        let idx = self
            .index_of(user)
            .ok_or_else(|| Error::data(format!("unknown user `{user}`")))?;
        let mut ids: Vec<&str> = self
            .followees_by_index(idx)
            .iter()
            .map(|&v| self.user_id(v))
            .collect();
        ids.sort_unstable();
        Ok(ids)
    }

    /// Out-degree of a user by dense index.
    pub fn out_degree(&self, idx: u32) -> usize {
        self.followees_by_index(idx).len()
    }

    /// Whether a user has enough followees for its pseudo-labels to be
    /// trusted: out-degree at least `min_degree` (inclusive boundary).
    pub fn vote_eligible(&self, user: &str, min_degree: usize) -> Result<bool> {
        let idx = self
            .index_of(user)
            .ok_or_else(|| Error::data(format!("unknown user `{user}`")))?;
        Ok(self.out_degree(idx) >= min_degree)
    }

    /// Iterate user ids in dense-index order.
    pub fn users(&self) -> impl Iterator<Item = &str> {
        self.user_ids.iter().map(String::as_str)
    }
}
