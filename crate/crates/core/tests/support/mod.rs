#![allow(dead_code)]

pub mod dd;
