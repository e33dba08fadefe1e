//! Regenerates the OBJ files under `fixtures/`.
//!
//! `cargo run -p geodesic-mesh --example write_fixtures [DIR]`

use std::path::PathBuf;

use geodesic_mesh::fixtures::shipped;
use geodesic_mesh::to_obj;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    std::fs::create_dir_all(&dir)?;
    for (name, mesh) in shipped() {
        let path = dir.join(format!("{name}.obj"));
        std::fs::write(&path, to_obj(&mesh))?;
        println!(
            "{} ({} vertices, {} faces)",
            path.display(),
            mesh.vertex_count(),
            mesh.face_count()
        );
    }
    Ok(())
}
