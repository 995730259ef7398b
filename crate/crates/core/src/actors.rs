//! Political actor configuration and mention detection.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::ProcessedTweet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActorKind {
    Candidate,
    Party,
    Combined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Actor {
    pub id: String,
    pub kind: ActorKind,
    /// Lowercase match phrases. Combined actors match through their
    /// components and need none.
    #[serde(default)]
    pub aliases: Vec<String>,
    /// `[candidate id, party id]` for combined actors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<(String, String)>,
    /// Display name for reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Actor {
    /// Every word of every alias, for use as extra stopwords.
    pub fn alias_words(&self) -> impl Iterator<Item = &str> {
        self.aliases.iter().flat_map(|a| a.split_whitespace())
    }
}

#[derive(Debug, Deserialize)]
struct ActorFile {
    #[serde(default, rename = "actor")]
    actors: Vec<Actor>,
}

/// A validated, ordered set of actors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ActorSet {
    actors: Vec<Actor>,
    index: HashMap<String, usize>,
    /// Per non-combined actor: alias phrases split into tokens.
    phrases: Vec<Vec<Vec<String>>>,
}

impl ActorSet {
    /// Validates and builds the set; every problem is reported.
    pub fn new(actors: Vec<Actor>) -> std::result::Result<Self, Vec<String>> {
        let problems = validate_actors(&actors);
        if !problems.is_empty() {
            return Err(problems);
        }
        let index = actors
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        let phrases = actors
            .iter()
            .map(|a| {
                a.aliases
                    .iter()
                    .map(|al| crate::preprocess::tokenize(al))
                    .collect()
            })
            .collect();
        Ok(ActorSet {
            actors,
            index,
            phrases,
        })
    }

    pub fn from_toml_str(s: &str) -> std::result::Result<Self, Vec<String>> {
        let file: ActorFile = toml::from_str(s).map_err(|e| vec![format!("actor config: {e}")])?;
        Self::new(file.actors)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|p| Error::Config(p.join("; ")))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Actor> {
        self.actors.iter()
    }

    pub fn len(&self) -> usize {
        self.actors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Actor> {
        self.index.get(id).map(|&i| &self.actors[i])
    }

    pub fn combined(&self) -> impl Iterator<Item = &Actor> {
        self.actors.iter().filter(|a| a.kind == ActorKind::Combined)
    }

    /// All alias words of all actors.
    pub fn all_alias_words(&self) -> BTreeSet<String> {
        self.actors
            .iter()
            .flat_map(|a| a.alias_words().map(str::to_string))
            .collect()
    }

    /// Ids of actors mentioned in a token stream. A candidate or party
    /// matches when one of its aliases appears as a contiguous token run; a
    /// combined actor matches when both of its components do.
    pub fn match_tokens(&self, tokens: &[String]) -> BTreeSet<String> {
        let mut matched: BTreeSet<String> = self
            .actors
            .iter()
            .zip(&self.phrases)
            .filter(|(a, _)| a.kind != ActorKind::Combined)
            .filter(|(_, phrases)| phrases.iter().any(|p| contains_phrase(tokens, p)))
            .map(|(a, _)| a.id.clone())
            .collect();
        let combined: Vec<String> = self
            .combined()
            .filter(|a| {
                let (c, p) = a.components.as_ref().expect("validated");
                matched.contains(c) && matched.contains(p)
            })
            .map(|a| a.id.clone())
            .collect();
        matched.extend(combined);
        matched
    }

    pub fn match_actors(&self, tweet: &ProcessedTweet) -> BTreeSet<String> {
        self.match_tokens(&tweet.surface_tokens)
    }

    /// The single scope actor a tweet is about, if any. A candidate named
    /// together with their own party is folded into the combined actor, so
    /// the tweet never counts for the candidate or the party alone, whether
    /// or not the combined actor is in scope.
    pub fn sole_mention(&self, matched: &BTreeSet<String>, scope: &[String]) -> Option<String> {
        let mut identities: BTreeSet<&str> = scope
            .iter()
            .map(String::as_str)
            .filter(|id| matched.contains(*id))
            .collect();
        for id in matched {
            if let Some((c, p)) = self.get(id).and_then(|a| a.components.as_ref()) {
                identities.remove(c.as_str());
                identities.remove(p.as_str());
            }
        }
        match identities.len() {
            1 => identities.into_iter().next().map(str::to_string),
            _ => None,
        }
    }

    pub fn mention_matrix(&self, tweets: &[ProcessedTweet]) -> MentionMatrix {
        MentionMatrix {
            rows: tweets
                .iter()
                .map(|t| (t.record_id.clone(), self.match_actors(t)))
                .collect(),
        }
    }

    /// Tweet count per actor, all configured actors present.
    pub fn group_counts(&self, matrix: &MentionMatrix) -> BTreeMap<String, usize> {
        let mut counts: BTreeMap<String, usize> =
            self.actors.iter().map(|a| (a.id.clone(), 0)).collect();
        for (_, ids) in &matrix.rows {
            for id in ids {
                if let Some(c) = counts.get_mut(id) {
                    *c += 1;
                }
            }
        }
        counts
    }
}

fn contains_phrase(tokens: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && tokens.windows(phrase.len()).any(|w| w == phrase)
}

fn validate_actors(actors: &[Actor]) -> Vec<String> {
    let mut problems = Vec::new();
    let mut ids: HashMap<&str, &Actor> = HashMap::new();
    for a in actors {
        if a.id.trim().is_empty() {
            problems.push("actor with empty id".to_string());
        }
        if ids.insert(&a.id, a).is_some() {
            problems.push(format!("duplicate actor id '{}'", a.id));
        }
    }

    let mut alias_owner: HashMap<(ActorKind, &str), &str> = HashMap::new();
    for a in actors {
        match a.kind {
            ActorKind::Combined => match &a.components {
                None => problems.push(format!("combined actor '{}' has no components", a.id)),
                Some((c, p)) => {
                    match ids.get(c.as_str()) {
                        None => problems.push(format!(
                            "combined actor '{}' references missing candidate '{c}'",
                            a.id
                        )),
                        Some(x) if x.kind != ActorKind::Candidate => problems.push(format!(
                            "combined actor '{}': component '{c}' is not a candidate",
                            a.id
                        )),
                        _ => {}
                    }
                    match ids.get(p.as_str()) {
                        None => problems.push(format!(
                            "combined actor '{}' references missing party '{p}'",
                            a.id
                        )),
                        Some(x) if x.kind != ActorKind::Party => problems.push(format!(
                            "combined actor '{}': component '{p}' is not a party",
                            a.id
                        )),
                        _ => {}
                    }
                }
            },
            _ => {
                if a.components.is_some() {
                    problems.push(format!(
                        "actor '{}' is not combined but lists components",
                        a.id
                    ));
                }
                if a.aliases.iter().all(|al| al.trim().is_empty()) {
                    problems.push(format!("actor '{}' has no aliases", a.id));
                }
            }
        }
        for alias in &a.aliases {
            if alias.trim().is_empty() {
                problems.push(format!("actor '{}' has an empty alias", a.id));
            }
            if alias.to_lowercase() != *alias {
                problems.push(format!(
                    "actor '{}': alias '{alias}' is not lowercase",
                    a.id
                ));
            }
            if let Some(other) = alias_owner.insert((a.kind, alias.as_str()), &a.id) {
                if other != a.id {
                    problems.push(format!(
                        "alias '{alias}' shared by actors '{other}' and '{}'",
                        a.id
                    ));
                }
            }
        }
    }
    problems
}

/// Matched actor ids per tweet, in tweet order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MentionMatrix {
    pub rows: Vec<(String, BTreeSet<String>)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CONFIG: &str = r#"
        [[actor]]
        id = "willie_obiano"
        kind = "candidate"
        aliases = ["obiano", "willie obiano"]

        [[actor]]
        id = "oseloka_obaze"
        kind = "candidate"
        aliases = ["obaze"]

        [[actor]]
        id = "apga"
        kind = "party"
        aliases = ["apga"]

        [[actor]]
        id = "upp"
        kind = "party"
        aliases = ["upp"]

        [[actor]]
        id = "pdp"
        kind = "party"
        aliases = ["pdp"]

        [[actor]]
        id = "willie_obiano_apga"
        kind = "combined"
        components = ["willie_obiano", "apga"]
    "#;

    fn set() -> ActorSet {
        ActorSet::from_toml_str(CONFIG).unwrap()
    }

    fn toks(s: &str) -> Vec<String> {
        crate::preprocess::surface_tokens(s)
    }

    fn ids(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn candidate_party_and_combined() {
        let m = set().match_tokens(&toks("obiano wins apga sweeps"));
        assert_eq!(m, ids(&["willie_obiano", "apga", "willie_obiano_apga"]));
    }

    #[test]
    fn no_alias_no_match() {
        assert!(set()
            .match_tokens(&toks("queues at the polling unit"))
            .is_empty());
    }

    #[test]
    fn two_parties_in_one_tweet() {
        let m = set().match_tokens(&toks(
            "Anambra Poll: Election observers, APGA, UPP commend timely distribution",
        ));
        assert_eq!(m, ids(&["apga", "upp"]));
    }

    #[test]
    fn multiword_alias_needs_contiguity() {
        let s = ActorSet::from_toml_str(
            r#"
            [[actor]]
            id = "tony"
            kind = "candidate"
            aliases = ["tony nwoye"]
            "#,
        )
        .unwrap();
        assert!(s.match_tokens(&toks("tony says nwoye")).is_empty());
        assert_eq!(s.match_tokens(&toks("Tony Nwoye votes")), ids(&["tony"]));
    }

    #[test]
    fn sole_mention_rules() {
        let s = set();
        let scope: Vec<String> = ["willie_obiano", "apga", "pdp", "willie_obiano_apga"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            s.sole_mention(&ids(&["willie_obiano"]), &scope),
            Some("willie_obiano".into())
        );
        assert_eq!(
            s.sole_mention(&ids(&["willie_obiano", "pdp"]), &scope),
            None
        );
        // Candidate with own party folds into the combined identity.
        assert_eq!(
            s.sole_mention(
                &ids(&["willie_obiano", "apga", "willie_obiano_apga"]),
                &scope
            ),
            Some("willie_obiano_apga".into())
        );
        // Without the combined actor in scope the tweet belongs to nobody.
        let narrow: Vec<String> = vec!["willie_obiano".into(), "apga".into()];
        assert_eq!(
            s.sole_mention(
                &ids(&["willie_obiano", "apga", "willie_obiano_apga"]),
                &narrow
            ),
            None
        );
        assert_eq!(
            s.sole_mention(
                &ids(&["willie_obiano", "apga", "willie_obiano_apga"]),
                &narrow[..1]
            ),
            None
        );
        // Out-of-scope actors are ignored.
        assert_eq!(
            s.sole_mention(&ids(&["pdp", "upp"]), &scope),
            Some("pdp".into())
        );
    }

    #[test]
    fn group_counts_include_zeros() {
        let s = set();
        let matrix = MentionMatrix {
            rows: vec![
                ("1".into(), ids(&["apga"])),
                ("2".into(), ids(&["apga", "upp"])),
            ],
        };
        let counts = s.group_counts(&matrix);
        assert_eq!(counts["apga"], 2);
        assert_eq!(counts["upp"], 1);
        assert_eq!(counts["pdp"], 0);
        assert!(s
            .group_counts(&MentionMatrix::default())
            .values()
            .all(|&c| c == 0));
    }

    #[test]
    fn validation_reports_everything() {
        let bad = r#"
            [[actor]]
            id = "x"
            kind = "candidate"
            aliases = ["Same"]

            [[actor]]
            id = "y"
            kind = "candidate"
            aliases = ["Same"]

            [[actor]]
            id = "x_z"
            kind = "combined"
            components = ["x", "zpp"]
        "#;
        let problems = ActorSet::from_toml_str(bad).unwrap_err();
        assert!(problems.iter().any(|p| p.contains("not lowercase")));
        assert!(problems.iter().any(|p| p.contains("shared by")));
        assert!(problems.iter().any(|p| p.contains("missing party 'zpp'")));
    }
}
