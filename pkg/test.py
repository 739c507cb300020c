'''A performance testing script.'''

import shutil
import sys
import tempfile
import time

import apps.sweeps as aw

# ----------------------------------------------------------------------

# PREAMBLE

t0 = time.time()

jobs = 1            # Worker processes
trace_budget = 120  # Seconds allowed for the trace sweep
morawetz_budget = 600  # Seconds allowed for the Morawetz sweep

directory = tempfile.mkdtemp(prefix="sweeps-")

trace = aw.RunConfig(command="trace", output=directory, jobs=jobs, logg="CRITICAL", **aw.ACCEPTANCE["trace"])
trace.validate()
morawetz = aw.RunConfig(command="morawetz", output=directory, jobs=jobs, logg="CRITICAL", **aw.ACCEPTANCE["morawetz"])
morawetz.validate()
t1 = time.time()

# TRACE SWEEP

trace_status = aw.run(trace)
t2 = time.time()

# MORAWETZ SWEEP

morawetz_status = aw.run(morawetz)
t3 = time.time()

# RESULTS

places = 3  # Decimal places
print(f"Preamble: {round(t1-t0, places)} seconds")
print(f"Trace sweep (status {trace_status}): {round(t2-t1, places)} seconds of {trace_budget}")
print(f"Morawetz sweep (status {morawetz_status}): {round(t3-t2, places)} seconds of {morawetz_budget}")

# POSTAMBLE

shutil.rmtree(directory, ignore_errors=True)
over = (t2 - t1) > trace_budget or (t3 - t2) > morawetz_budget
sys.exit(1 if over else 0)
