//! Small hand-made games used by tests, docs and the CLI.

use crate::game::AchievementGame;

/// A blue butterfly on `b, b1..b6` plus the red edge `{b, d}`.
///
/// Left wins moving first; the game is drawn when Right moves first.
pub fn butterfly_bomb() -> AchievementGame {
    AchievementGame::from_lists(
        8,
        &[&[0, 1, 2], &[0, 2, 3], &[0, 4, 5], &[0, 5, 6]],
        &[&[0, 7]],
    )
    .and_then(|g| g.named(&["b", "b1", "b2", "b3", "b4", "b5", "b6", "d"]))
    .expect("fixture is well formed")
}
