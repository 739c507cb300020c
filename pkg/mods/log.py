'''The module containing objects that manage logging.'''

import datetime
import logging
import os


# ----------------------------------------------------------------------------

LEVELS = {"NOTSET":logging.NOTSET, "DEBUG":logging.DEBUG, "INFO":logging.INFO,
"WARNING":logging.WARNING, "ERROR":logging.ERROR, "CRITICAL":logging.CRITICAL,
"NONE":logging.CRITICAL+1}

# Conventions for logging levels, from least severe to most severe:
# DEBUG = Branch choices, panel counts and grid sizes inside numeric routines.
# INFO = Commands started and finished, rows written.
# WARNING = Note of something unusual, e.g. a tail bound dominating a value; result still returned.
# ERROR = A sweep entry failed and went to the failure manifest.
# CRITICAL = Run aborted.
#
# NOTSET is the default. It returns all messages.
# NONE is a setting which returns no messages.

LOGTIME = str(datetime.datetime.now().strftime('%Y-%m-%d-%H%M%S'))
FORMAT = "%(asctime)s %(name)s.%(levelname)s %(message)s"
DATEFMT = "%Y-%m-%d %H:%M:%S %z"

_directory = None
_names = set()

# ----------------------------------------------------------------------------

def get(name: str, level: str = "NOTSET"):
    '''Returns a pre-configured Logger object, used for writing logs.

    For Logger methods, see https://docs.python.org/3/library/logging.html#logging.Logger

    For logging level explaination, see mods/log.py itself.

    name = Name of the logger.
    level = Minimum level of logging messages to report: "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL", "NONE"
    '''
    logger = logging.getLogger(name=name)
    level = LEVELS[level]
    if name not in _names:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(fmt=FORMAT, datefmt=DATEFMT))
        logger.addHandler(handler)
        logger.propagate = False
        _names.add(name)
        if _directory is not None:
            _file_attach(logger)
    for handler in logger.handlers:
        handler.setLevel(level)
    logger.setLevel(level)
    return logger


def level_set(level: str):
    '''Changes the level of every logger handed out by this module.

    level = Minimum level of logging messages to report.
    '''
    for name in _names:
        get(name, level=level)


def directory_set(path: str):
    '''Starts writing every logger to a file named after LOGTIME inside path.

    path = Directory for log files; created when missing.
    '''
    global _directory
    os.makedirs(path, exist_ok=True)
    _directory = path
    for name in _names:
        _file_attach(logging.getLogger(name))


def _file_attach(logger: logging.Logger):
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler):
            return
    handler_file = logging.FileHandler(filename=os.path.join(_directory, f"{LOGTIME}.log"), encoding="utf-8")
    handler_file.setFormatter(logging.Formatter(fmt=FORMAT, datefmt=DATEFMT))
    handler_file.setLevel(logger.level)
    logger.addHandler(handler_file)


# ----------------------------------------------------------------------------
