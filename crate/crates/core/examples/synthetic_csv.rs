fn main(){print!("{}", tweetlens::synth::synthetic_csv(400, 3));}
