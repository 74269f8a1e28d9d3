pub fn hello() -> usize { 1 }
