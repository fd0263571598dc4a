#!/usr/bin/env python3
"""Scripted SMT-LIB responder for backend protocol tests.

Modes (argv[1]): sat | unsat | hang | crash | garbage
  sat:     answers sat to check-sat; get-value returns true / 0 for all names
  unsat:   answers unsat
  hang:    never answers check-sat (exercises the wall-clock watchdog)
  crash:   exits as soon as check-sat arrives
  garbage: answers with an unparseable token
"""
import re
import sys
import time

mode = sys.argv[1] if len(sys.argv) > 1 else "sat"

for line in sys.stdin:
    line = line.strip()
    if not line:
        continue
    if line.startswith("(check-sat"):
        if mode == "hang":
            time.sleep(3600)
        if mode == "crash":
            sys.exit(3)
        if mode == "garbage":
            print("maybe")
            sys.stdout.flush()
            continue
        print({"sat": "sat", "unsat": "unsat"}.get(mode, "unknown"))
        sys.stdout.flush()
    elif line.startswith("(get-value"):
        names = re.findall(r"[bn]\d+", line)
        parts = []
        for n in names:
            parts.append("(%s %s)" % (n, "true" if n.startswith("b") else "0"))
        print("(" + " ".join(parts) + ")")
        sys.stdout.flush()
    elif line.startswith("(exit"):
        sys.exit(0)
