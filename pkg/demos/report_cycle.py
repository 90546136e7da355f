"""Write a report with the CLI entry point, then recheck it from disk."""
import json
import tempfile
from pathlib import Path

from heckecert.cli import main

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "steps.json"
    main(["verify", "steps", "--p", "7,11", "--out", str(out)])
    doc = json.loads(out.read_text())
    print("summary:", doc["summary"])
    print("config hash:", doc["meta"]["config_sha256"])
    main(["recheck", str(out)])
