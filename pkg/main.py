'''The script that runs the estimate verification sweeps.'''

import argparse
import os
import sys

if sys.version_info.major == 3 and sys.version_info.minor >= 9:
    import apps.sweeps as aw
    import mods.errors as me
    import mods.log as ml
else:
    print("This application must be run using Python 3.9 or newer.")
    sys.exit(1)

# ----------------------------------------------------------------------------

DEFAULT_CONF = "run_config.json"
LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL", "NONE"]


def parser_build():
    '''Returns the argument parser of the command line.'''
    parser = argparse.ArgumentParser(description='Verifies the weighted trace, Morawetz and Strichartz estimates mode by mode')
    parser.add_argument('command', nargs="?", default=None, help="what to run: " + ", ".join(aw.COMMANDS), choices=aw.COMMANDS, metavar="COMMAND")
    parser.add_argument('-c','--conf', type=str, default=DEFAULT_CONF, help="relative path to the JSON run configuration", metavar="PATH")
    parser.add_argument('-j','--jobs', type=int, default=None, help="number of worker processes", metavar="JOBS")
    # '-h' brings up help
    parser.add_argument('-l','--logg', default=None, help="minimum level of logging messages that are printed: DEBUG, INFO, WARNING, ERROR, CRITICAL, or NONE", choices=LEVELS, metavar="LEVL")
    parser.add_argument('-d','--logd', type=str, default=None, help="if given, logs are also written to a file in this directory", metavar="PATH")
    parser.add_argument('-o','--outp', type=str, default=None, help="directory the reports are written to", metavar="PATH")
    parser.add_argument('--format', default=None, help="report format: csv or json", choices=aw.FORMATS, metavar="FMT")
    parser.add_argument('--n', type=int, nargs="+", default=None, help="dimensions", metavar="N")
    parser.add_argument('--b', type=float, nargs="+", default=None, help="weight exponents; replaces the b grid", metavar="B")
    parser.add_argument('--a', type=float, nargs="+", default=None, help="dispersion exponents", metavar="A")
    parser.add_argument('--kmax', type=int, default=None, help="largest degree of the trace tables", metavar="K")
    parser.add_argument('--k', type=int, nargs="+", default=None, help="degrees of the simulated commands", metavar="K")
    parser.add_argument('--rexp', type=str, nargs="+", default=None, help="exponents r of the weighted Strichartz sweep, inf allowed", metavar="R")
    parser.add_argument('--p', type=str, default=None, help="power of the nonlinearity, e.g. 5/2", metavar="P")
    parser.add_argument('--q', type=str, default=None, help="time exponent q", metavar="Q")
    parser.add_argument('--r', type=str, default=None, help="space exponent r", metavar="R")
    parser.add_argument('--wave', help="if included, the exponents command reports the wave equation", action='store_true')
    parser.add_argument('--schrodinger', help="if included, the exponents command reports the Schrodinger equation", action='store_true')
    parser.add_argument('--horizon', type=float, default=None, help="time truncation in units of the profile time scale", metavar="T")
    parser.add_argument('--density', type=float, default=None, help="refinement factor of the simulation grids", metavar="X")
    parser.add_argument('-f','--func', type=str, default=None, help="relative path to a text records file of the test function to simulate", metavar="PATH")
    return parser


def overrides_build(args):
    '''Returns the RunConfig fields set on the command line.'''
    equation = [name for name, flag in (("wave", args.wave), ("schrodinger", args.schrodinger)) if flag] or None
    return {"command": args.command, "jobs": args.jobs, "logg": args.logg, "output": args.outp, "format": args.format,
        "n_list": args.n, "b_list": args.b, "a_list": args.a, "k_max": args.kmax, "k_list": args.k,
        "r_exp_list": args.rexp, "p": args.p, "q": args.q, "r": args.r, "equation": equation,
        "horizon": args.horizon, "radial_density": args.density, "function": args.func}


def main(argv=None):
    '''Runs the command line and returns the exit status.'''
    args = parser_build().parse_args(argv)
    logger = ml.get(name="Main", level=args.logg or "WARNING")
    if args.logd is not None:
        ml.directory_set(args.logd)
    conf = args.conf
    if conf == DEFAULT_CONF and not os.path.exists(conf):
        conf = None
    try:
        config = aw.RunConfig.load(conf, overrides_build(args))
    except me.UsageError as error:
        logger.critical(f"Invalid run configuration: {error}")
        return aw.EXIT_USAGE
    ml.level_set(config.logg)
    logger.info("Application has started.")
    code = aw.run(config)
    logger.info("Application is ending.")
    return code


if __name__ == "__main__": # Multiprocessing library complains if this guard isn't used
    sys.exit(main())
