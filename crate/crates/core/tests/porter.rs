//! Stems checked against vectors frozen from the reference implementation.

use electionpulse::preprocess::stem;

#[test]
fn reference_vectors() {
    let text = include_str!("data/porter_vectors.tsv");
    let mut checked = 0;
    let mut wrong = Vec::new();
    for line in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let (word, expected) = line.split_once('\t').expect("word<TAB>stem");
        let got = stem(word);
        if got != expected {
            wrong.push(format!("{word}: got {got}, want {expected}"));
        }
        checked += 1;
    }
    assert!(checked > 2000, "only {checked} vectors");
    assert!(
        wrong.is_empty(),
        "{} mismatches:\n{}",
        wrong.len(),
        wrong.join("\n")
    );
}
