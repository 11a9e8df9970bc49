#!/usr/bin/env python3
# Copyright 2026 The vlsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prepends tools/license_header.txt to C++ sources and CMake files that lack it."""
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
HEADER = (ROOT / "tools" / "license_header.txt").read_text()
CXX_DIRS = ["include", "src", "tests", "tools"]
CXX_SUFFIXES = {".cpp", ".hpp", ".h", ".cc"}
MARKER = "Copyright 2026 The vlsim Authors"


def hash_comment(text: str) -> str:
    lines = [l.strip() for l in text.strip().splitlines()]
    body = [l.lstrip("/* ").rstrip(" */") if l not in ("/*", "*/") else None for l in lines]
    return "".join(f"# {l}\n".replace("# \n", "#\n") for l in body if l is not None) + "\n"


def process(path: pathlib.Path, header: str, check: bool) -> bool:
    text = path.read_text()
    if MARKER in text[:600]:
        return False
    if not check:
        path.write_text(header + ("" if header.endswith("\n\n") else "\n") + text)
    return True


def main() -> int:
    check = "--check" in sys.argv
    changed = []
    for d in CXX_DIRS:
        for p in sorted((ROOT / d).rglob("*")):
            if p.suffix in CXX_SUFFIXES and "golden" not in p.parts:
                if process(p, HEADER, check):
                    changed.append(p)
    for p in [ROOT / "CMakeLists.txt"]:
        if process(p, hash_comment(HEADER), check):
            changed.append(p)
    for p in changed:
        print(("missing: " if check else "added: ") + str(p.relative_to(ROOT)))
    return 1 if check and changed else 0


if __name__ == "__main__":
    sys.exit(main())
