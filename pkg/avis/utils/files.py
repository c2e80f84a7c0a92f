import os
import re


def sanitize_name(name: str) -> str:
    """Sanitize a run or video name for filesystem paths."""
    return re.sub(r"\W+", "_", name)


def ensure_run_folder(root: str, verb: str) -> str:
    """Create root/<verb>_<n> with n one past the highest existing number."""
    os.makedirs(root, exist_ok=True)
    prefix = f'{sanitize_name(verb)}_'
    numbers = [int(d[len(prefix):]) for d in os.listdir(root)
               if d.startswith(prefix) and d[len(prefix):].isdigit()]
    folder = os.path.join(root, f'{prefix}{max(numbers) + 1 if numbers else 1:04d}')
    os.makedirs(folder)
    return folder


def write_manifest(path: str, entries: dict) -> None:
    """Plain key=value lines, one per entry, in insertion order."""
    with open(path, 'w') as f:
        for key, value in entries.items():
            f.write(f'{key}={value}\n')


def read_manifest(path: str) -> dict:
    entries = {}
    with open(path) as f:
        for line in f:
            line = line.rstrip('\n')
            if '=' in line:
                key, value = line.split('=', 1)
                entries[key] = value
    return entries
