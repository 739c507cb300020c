import json
import logging
import math
import os
import time
from fractions import Fraction

import pytest

import apps.sweeps as aw
import mods.errors as me
import mods.inequalities as mi
import mods.log as ml
import mods.reports as mr
import mods.worker as mw


# ----------------------------------------------------------------------------

def test_execute_returns_data_or_error():
    reply = mw.execute({"message": "task", "key": ("a",), "function": mi.stirling_limit, "kwargs": {"b": 2.0}})
    assert reply == {"message": "data", "key": ("a",), "data": pytest.approx(0.5)}
    reply = mw.execute({"message": "task", "key": ("b",), "function": mi.stirling_limit, "kwargs": {"b": 0.5}})
    assert reply["message"] == "error" and reply["error"] == "DomainError"


def tasks():
    return [((b,), mi.stirling_limit, {"b": b}) for b in (0.5, 1.5, 2.0, 2.5, 3.0)]


@pytest.mark.parametrize("jobs", [1, 2])
def test_pool_results_do_not_depend_on_jobs(jobs):
    results, failures = mw.Pool(jobs=jobs, level="NONE").run(tasks())
    assert sorted(results) == [(1.5,), (2.0,), (2.5,), (3.0,)]
    assert results[(2.0,)] == pytest.approx(0.5)
    assert list(failures) == [(0.5,)] and failures[(0.5,)][0] == "DomainError"


def test_pool_validation():
    with pytest.raises(me.DomainError):
        mw.Pool(jobs=0)
    with pytest.raises(me.DomainError):
        mw.Pool(jobs=2, poll=0.0)


def exit_abruptly(code: int, delay: float = 0.5):
    time.sleep(delay)
    os._exit(code)


def test_exited_worker_becomes_a_failure():
    tasks = [(("ok", 2.0), mi.stirling_limit, {"b": 2.0}), (("exit",), exit_abruptly, {"code": 3}),
        (("ok", 3.0), mi.stirling_limit, {"b": 3.0})]
    results, failures = mw.Pool(jobs=2, level="NONE", poll=0.5).run(tasks)
    assert sorted(results) == [("ok", 2.0), ("ok", 3.0)]
    assert list(failures) == [("exit",)] and failures[("exit",)][0] == "WorkerError"


def test_lost_task_maps_to_the_budget_status():
    assert aw.status([{"key": "exit", "error": "WorkerError", "text": ""}]) == aw.EXIT_BUDGET


def test_worker_loop_stops_on_close():
    class Box:
        def __init__(self):
            self.items = []

        def put(self, item):
            self.items.append(item)

    worker = mw.SweepWorker()
    worker.outQueue = Box()
    worker.processQueueMessage({"message": "task", "key": 1, "function": mi.stirling_limit, "kwargs": {"b": 2.0}})
    worker.processQueueMessage({"message": "close"})
    assert [item["message"] for item in worker.outQueue.items] == ["start", "data"]
    assert worker.outQueue.items[0]["key"] == 1 and worker.outQueue.items[1]["data"] == pytest.approx(0.5)
    assert worker.connection is False


# ----------------------------------------------------------------------------

@pytest.mark.parametrize("value, text", [
    (None, ""), (True, "true"), (False, "false"), (Fraction(5, 2), "5/2"),
    (math.inf, "inf"), (0.1, "0.1"), (3, "3"), ("0;1", "0;1"),
])
def test_cell(value, text):
    assert mr.cell(value) == text


def test_plain():
    assert mr.plain({1: (Fraction(1, 3), math.inf, 2.0)}) == {"1": ["1/3", "inf", 2.0]}


def test_tables_and_manifest(tmp_path):
    rows = [{"n": 3, "ratio": 0.25, "passed": True}, {"n": 4, "ratio": None, "passed": False}]
    path = mr.write_table(str(tmp_path), "demo", ("n", "ratio", "passed"), rows)
    with open(path, encoding="utf-8") as handle:
        assert handle.read() == "n,ratio,passed\n3,0.25,true\n4,,false\n"
    path = mr.write_table(str(tmp_path), "demo", ("n", "ratio"), rows, fmt="json")
    with open(path, encoding="utf-8") as handle:
        assert json.load(handle) == [{"n": 3, "ratio": 0.25}, {"n": 4, "ratio": None}]
    mr.write_manifest(str(tmp_path), "trace", {"demo.csv": 2}, [{"key": [3], "error": "ToleranceError", "text": "x"}], 3)
    with open(os.path.join(tmp_path, "manifest.json"), encoding="utf-8") as handle:
        manifest = json.load(handle)
    assert manifest["status"] == 3 and manifest["files"] == {"demo.csv": 2}
    assert manifest["failures"][0]["error"] == "ToleranceError"


# ----------------------------------------------------------------------------

def test_loggers_follow_the_global_level():
    logger = ml.get("TestReports", level="NONE")
    assert logger.level == ml.LEVELS["NONE"]
    assert ml.get("TestReports", level="DEBUG") is logger and len(logger.handlers) == 1
    ml.level_set("ERROR")
    assert logger.level == logging.ERROR
    ml.level_set("WARNING")
