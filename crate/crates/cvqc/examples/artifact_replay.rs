//! Transcripts as files: serialize a session, reload it elsewhere, and
//! re-verify it from scratch.
//!
//! Artifact files embed the setup (trapdoors included — they are
//! verification state, not secrets once the session is over), so a
//! stored session replays without any other context. For the
//! hash-derived variant the challenge itself is re-derivable, making
//! the file self-authenticating against the instance.

use cvqc::artifacts::{load_json, save_json, SetupFile, TranscriptFile};
use cvqc::fiatshamir::{fs_prove, fs_verify};
use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::{setup, HonestProver, ProtocolParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let dir = std::env::temp_dir().join("cvqc_artifact_replay");
    std::fs::create_dir_all(&dir)?;

    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let instance = reference_instance(-0.9, -0.5);
    let params = ProtocolParams::new(8, 2, 16, 3, Backend::Mock)?;
    let vs = setup(params, &mut rng)?.verifier;

    let mut prover = HonestProver::new(instance.ground().1, &vs)?;
    let t = fs_prove(&instance, &vs, &mut prover, &mut rng);

    // Round-trip the setup and the transcript through JSON files.
    let setup_path = dir.join("setup.json");
    let transcript_path = dir.join("transcript.json");
    save_json(&setup_path, &SetupFile::from_setup(&vs))?;
    save_json(&transcript_path, &TranscriptFile::from_fs(29, &vs, &t))?;

    let vs2 = load_json::<SetupFile>(&setup_path)?.to_setup()?;
    let tf = load_json::<TranscriptFile>(&transcript_path)?;
    assert_eq!(vs2.digest(), vs.digest(), "setup survives the round trip");

    let t2 = tf.to_fs_transcript()?;
    assert_eq!(t2.digest(), t.digest(), "transcript survives the round trip");
    let replayed = fs_verify(&instance, &vs2, &t2);
    println!("stored decision   {}", t.decision);
    println!("replayed verdict  {replayed}");
    println!("files under       {}", dir.display());
    Ok(())
}
