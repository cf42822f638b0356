//! Draw a synthetic linked corpus and look at what came out.
//!
//! ```text
//! cargo run --example generate_synthetic
//! ```

use nrt::data::generate_synthetic;

fn main() -> nrt::Result<()> {
    let (corpus, network, truth) = generate_synthetic(3, 50, 40, 100, 7)?;

    println!(
        "{} documents, {} words, {} tokens, {} links",
        corpus.num_docs(),
        corpus.vocab_size(),
        corpus.total_tokens(),
        network.num_edges()
    );
    let degrees: Vec<usize> = (0..corpus.num_docs()).map(|d| network.degree(d)).collect();
    println!("degree range {}..={}", degrees.iter().min().unwrap(), degrees.iter().max().unwrap());

    for (k, topic) in truth.topics.iter().enumerate() {
        let mut top: Vec<usize> = (0..topic.len()).collect();
        top.sort_by(|&a, &b| topic[b].total_cmp(&topic[a]));
        println!("topic {k}: top words {:?}", &top[..5]);
    }
    let d = 0;
    println!("document {d}: interest {:.2?}, length {}", truth.doc_interest[d], truth.doc_lengths[d]);
    Ok(())
}
