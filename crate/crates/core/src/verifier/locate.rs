use serde::Serialize;

use crate::datagen::StatementSet;

use super::{Scorer, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    ConsistentReached,
    SizeTwoStop,
}

/// One pass of the loop: the score of the current remainder and, if it was
/// inconsistent with three or more statements, the leave-one-out scores
/// keyed by original index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocateStep {
    pub set_score: f64,
    pub leave_one_out: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocateResult {
    /// Original positions, in removal order.
    pub removed_indices: Vec<usize>,
    pub terminal: Terminal,
    pub trace: Vec<LocateStep>,
}

/// Greedy localization: while the remainder is judged inconsistent and has
/// more than two statements, drop the statement whose removal yields the
/// lowest score (ties to the smallest original index).
///
/// Subsets are always taken from `s` by original index, so their ids have the
/// form `{id}[i,j,...]`. The score of the chosen leave-one-out subset is
/// reused as the next verification score.
pub fn locate(scorer: &dyn Scorer, s: &StatementSet) -> Result<LocateResult, VerifyError> {
    if s.len() < 2 {
        return Err(VerifyError::TooSmall { set: s.id.clone(), size: s.len() });
    }
    let t = scorer.threshold();
    let mut keep: Vec<usize> = (0..s.len()).collect();
    let mut removed = Vec::new();
    let mut trace = Vec::new();
    let mut score = scorer.score(s)?;
    loop {
        if score < t {
            trace.push(LocateStep { set_score: score, leave_one_out: vec![] });
            return Ok(LocateResult { removed_indices: removed, terminal: Terminal::ConsistentReached, trace });
        }
        if keep.len() == 2 {
            trace.push(LocateStep { set_score: score, leave_one_out: vec![] });
            return Ok(LocateResult { removed_indices: removed, terminal: Terminal::SizeTwoStop, trace });
        }
        let mut loo = Vec::with_capacity(keep.len());
        for &j in &keep {
            let rest: Vec<usize> = keep.iter().copied().filter(|&k| k != j).collect();
            loo.push((j, scorer.score(&s.subset(&rest))?));
        }
        // keep is ascending, so the first minimum has the smallest index
        let &(j, best) = loo
            .iter()
            .fold(None, |acc: Option<&(usize, f64)>, x| match acc {
                Some(a) if a.1 <= x.1 => Some(a),
                _ => Some(x),
            })
            .expect("at least three candidates");
        trace.push(LocateStep { set_score: score, leave_one_out: loo });
        keep.retain(|&k| k != j);
        removed.push(j);
        score = best;
    }
}
