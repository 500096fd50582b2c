//! Placeholder; filled in next.
pub struct CorrespondencePair<R: crate::scalar::Real>(std::marker::PhantomData<R>);
pub struct TwistorPoint<R: crate::scalar::Real>(std::marker::PhantomData<R>);
pub struct DiskParams<R: crate::scalar::Real>(std::marker::PhantomData<R>);
