'''The module containing the process pool that runs sweep tasks.

Workers talk to the parent through two queues with dictionary messages:
  {"message": "task", "key": ..., "function": ..., "kwargs": {...}}   parent -> worker
  {"message": "close"}                                               parent -> worker
  {"message": "start", "key": ..., "pid": ...}                       worker -> parent
  {"message": "data", "key": ..., "data": ..., "pid": ...}           worker -> parent
  {"message": "error", "key": ..., "error": name, "text": ...}       worker -> parent
Functions must be importable module-level callables so they survive pickling.
A worker that exits before replying turns its task into a WorkerError reply.
'''

from multiprocessing import Process, Queue
import os
import queue

import mods.errors as me
import mods.log as ml


# ----------------------------------------------------------------------------

POLL_SECONDS = 5.0


def execute(message: dict):
    '''Runs one task message and returns the reply message.'''
    key = message["key"]
    try:
        data = message["function"](**message.get("kwargs", {}))
    except Exception as error:
        return {"message": "error", "key": key, "error": type(error).__name__, "text": str(error)}
    return {"message": "data", "key": key, "data": data}


def _lost(key, text: str):
    return {"message": "error", "key": key, "error": me.WorkerError.__name__, "text": text}


class SweepWorker:
    '''A receive loop that executes task messages until a close message arrives.

    inQueue: Queue of task and close messages.
    outQueue: Queue the replies are put on.
    '''

    def __init__(self, inQueue: Queue = None, outQueue: Queue = None):
        self.inQueue = inQueue
        self.outQueue = outQueue
        self.connection = True
        if inQueue is not None and outQueue is not None:
            self.run()

    def processQueueMessage(self, message: dict):
        if message.get("message") == "close":
            self.connection = False
        elif message.get("message") == "task":
            pid = os.getpid()
            self.outQueue.put({"message": "start", "key": message["key"], "pid": pid})
            self.outQueue.put({**execute(message), "pid": pid})

    def run(self):
        while self.connection:
            try:
                inMessage = self.inQueue.get(timeout=1.0)
            except queue.Empty:
                continue
            self.processQueueMessage(inMessage)


def _serve(inQueue: Queue, outQueue: Queue):
    SweepWorker(inQueue=inQueue, outQueue=outQueue)


# ----------------------------------------------------------------------------

class Pool:
    '''Runs (key, function, kwargs) tasks, in-process when jobs is 1 and on worker processes otherwise.

    Results come back as a dict keyed by task key, so the caller decides the output order.

    jobs: Number of worker processes.
    level: Minimum level of logging messages to report.
    poll: Seconds without a reply after which the workers are checked for exits.
    '''

    def __init__(self, jobs: int = 1, level: str = "WARNING", poll: float = POLL_SECONDS):
        me.require(int(jobs) == jobs and jobs >= 1, f"jobs must be a positive integer, got {jobs}")
        me.require(poll > 0, f"poll must be positive, got {poll}")
        self.jobs = int(jobs)
        self.poll = float(poll)
        self.logger = ml.get("Pool", level=level)

    def run(self, tasks):
        '''Returns ({key: data}, {key: (error name, text)}) for the tasks.'''
        messages = [{"message": "task", "key": key, "function": function, "kwargs": kwargs} for key, function, kwargs in tasks]
        if self.jobs == 1 or len(messages) <= 1:
            replies = [execute(message) for message in messages]
        else:
            replies = self._parallel(messages)
        results, failures = {}, {}
        for reply in replies:
            if reply["message"] == "data":
                results[reply["key"]] = reply["data"]
            else:
                failures[reply["key"]] = (reply["error"], reply["text"])
                self.logger.error(f"Task {reply['key']} failed with {reply['error']}: {reply['text']}")
        return results, failures

    def _parallel(self, messages):
        inQueue, outQueue = Queue(), Queue()
        count = min(self.jobs, len(messages))
        processes = [Process(target=_serve, args=(inQueue, outQueue), daemon=True) for _ in range(count)]
        for process in processes:
            process.start()
        self.logger.debug(f"Started {count} workers for {len(messages)} tasks.")
        for message in messages:
            inQueue.put(message)
        pending = {message["key"] for message in messages}
        running = {}
        replies = []
        while pending:
            try:
                reply = outQueue.get(timeout=self.poll)
            except queue.Empty:
                replies += self._reap(processes, running, pending)
                continue
            if reply["message"] == "start":
                running[reply["pid"]] = reply["key"]
                continue
            running.pop(reply.pop("pid", None), None)
            if reply["key"] in pending:
                pending.discard(reply["key"])
                replies.append(reply)
        inQueue.cancel_join_thread()
        for process in processes:
            if process.is_alive():
                inQueue.put({"message": "close"})
        for process in processes:
            process.join()
        return replies

    def _reap(self, processes, running, pending):
        '''Returns WorkerError replies for the tasks that exited workers can no longer answer.'''
        replies = []
        dead = [process for process in processes if not process.is_alive()]
        for process in dead:
            key = running.pop(process.pid, None)
            if key in pending:
                self.logger.error(f"Worker {process.pid} exited with code {process.exitcode} while running {key}.")
                pending.discard(key)
                replies.append(_lost(key, f"worker {process.pid} exited with code {process.exitcode}"))
        alive = [process for process in processes if process.is_alive()]
        if dead and not any(process.pid in running for process in alive):
            # live workers are idle, so what is left was lost with an exited worker
            for key in sorted(pending, key=repr):
                replies.append(_lost(key, "a worker exited before the task reported back"))
            pending.clear()
        return replies


# ----------------------------------------------------------------------------
