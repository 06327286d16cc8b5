//! Beat-wise rational ECG codec.
//!
//! Each beat is cut 130 samples before its QRS peak, its endpoint trend is
//! removed, and the normalized remainder is approximated in an MT basis
//! chosen by the swarm. Aligned mode first subtracts a compressed average
//! beat stored in the header.

pub mod bitstream;
pub mod decoder;
pub mod encoder;
pub mod format;
pub mod preprocess;

pub use decoder::{decode_record, DecodedRecord};
pub use encoder::{encode_record, EncodedRecord, EncoderConfig};
pub use format::{CompressedRecord, Mode};
