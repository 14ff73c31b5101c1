"""
adelic-polytopes - Quick Start Script
Runs the built-in reproductions, or forwards arguments to the CLI.
"""

import sys
from app.config import settings
from app.main import main

if __name__ == "__main__":
    if len(sys.argv) > 1:
        sys.exit(main(sys.argv[1:]))

    print("=" * 60, file=sys.stderr)
    print(f"{settings.APP_NAME} {settings.APP_VERSION}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    print(f"Environment: {settings.ENVIRONMENT}", file=sys.stderr)
    print(f"Embedding width: {settings.EMBED_WIDTH}", file=sys.stderr)
    print(f"Candidate cap: {settings.CANDIDATE_CAP}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)

    status = 0
    for name in ("figure1", "example1", "example2"):
        print(f"\n-- example {name}", file=sys.stderr)
        status = max(status, main(["example", name]))
    sys.exit(status)
