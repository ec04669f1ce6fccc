//! Spreads over Baire space, toy spreads and their sums, the equality logic
//! evaluated on them, Vitali-style relations, and checkable refutation
//! transcripts.

pub mod seqcore;
pub mod spread;
pub mod toyspread;
pub mod eqlogic;
pub mod vitali;
pub mod refuter;
pub mod lawdef;
