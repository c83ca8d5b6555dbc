//! Cantor space, Baire space, the embedding between them and rational
//! metric spaces.

mod baire;
mod iota;
mod metric;
mod point;
mod word;

pub use baire::{
    baire_constant, baire_covers, baire_extends, baire_words_of_length, BaireNegClosedSet,
    BaireStreamSpec, BaireTail, BaireToken, BaireWordEnum,
};
pub use iota::{
    iota_cover_set, iota_embed, iota_image_set, iota_inverse, iota_inverse_exact, iota_word,
    MAX_EMBED_SYMBOL,
};
pub use metric::{
    ball_dense_prefix, ball_dense_seq, cauchy_normalize, cauchy_normalize_point, certifies_removal,
    delta_eval, dyadic_point, format_rational, parse_rational, preimage_negative, two_pow_neg,
    DistSpec, DyadicInterval, FiniteSpace, MetricBall, MetricNegSet, MetricToken, NoBallMarker,
    RationalMetricSpace, SpaceFile,
};
pub use point::{BairePoint, BaireWord, CantorPoint, PointToken};
pub use word::{covers, uncovered_words, w, Token, Word};
