from avis.utils.files import sanitize_name, ensure_run_folder, write_manifest, read_manifest
