//! Load a LINQS citation dataset (Cora, Citeseer) and report what the
//! loader did with the citation records.
//!
//! ```text
//! cargo run --example load_citation -- path/to/cora.content path/to/cora.cites
//! ```
//!
//! Without arguments a tiny inline dataset is written to a temporary
//! directory and loaded instead.

use std::path::PathBuf;

use nrt::data::load_citation_dataset;

fn main() -> nrt::Result<()> {
    let args: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    let (content, cites) = match args.as_slice() {
        [content, cites] => (content.clone(), cites.clone()),
        _ => {
            let dir = std::env::temp_dir().join("nrt_load_citation_example");
            std::fs::create_dir_all(&dir).expect("temp dir");
            let content = dir.join("toy.content");
            let cites = dir.join("toy.cites");
            std::fs::write(&content, "p1\t1\t0\t1\tTheory\np2\t0\t1\t1\tAI\np3\t1\t1\t0\tTheory\n").expect("write");
            // a duplicate, a self-citation and an unknown id
            std::fs::write(&cites, "p1\tp2\np2\tp1\np3\tp3\np9\tp1\np3\tp1\n").expect("write");
            (content, cites)
        }
    };

    let ds = load_citation_dataset(&content, &cites)?;
    println!(
        "D = {}, W = {}, tokens = {}",
        ds.corpus.num_docs(),
        ds.corpus.vocab_size(),
        ds.corpus.total_tokens()
    );
    println!("{:#?}", ds.report);
    let mut labels = ds.labels.clone();
    labels.sort();
    labels.dedup();
    println!("labels: {labels:?}");
    Ok(())
}
