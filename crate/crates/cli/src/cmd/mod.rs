pub mod dims;
pub mod rewrite;
pub mod tensor;
pub mod verify;
