from epicast.version import VERSION as __version__

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _configure_logging(arguments, settings):
    import epicast.arguments
    import epiqbd.log

    verbosity = epicast.arguments.verbosity_from_arguments(arguments)
    if verbosity is not None:
        loglevel = epiqbd.log.verbosity_to_level(verbosity)
    else:
        loglevel = settings.verbosity
    epiqbd.log.set_level(loglevel)

    if settings.colored_output:
        epiqbd.log.EpiFormatter.USE_COLORS = True


def run(argv=None):
    """Run the command line and return the exit status."""
    import epicast.arguments

    try:
        (parser, arguments) = epicast.arguments.get(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (None, 0) else EXIT_OK

    if arguments.version:
        print("epicast", __version__)
        return EXIT_OK
    if not arguments.command:
        parser.print_usage()
        return EXIT_USAGE

    import epiqbd
    import epiqbd.log
    import epicast.commands
    import epicast.settings

    _logger = epiqbd.log.getLogger("epicast")

    settings = epicast.settings.initialise()
    _configure_logging(arguments, settings)

    try:
        epicast.commands.COMMANDS[arguments.command](arguments, settings)
    except epiqbd.NumericalError as e:
        _logger.error("%s", e)
        return EXIT_NUMERICAL
    except epiqbd.Error as e:
        _logger.error("%s", e)
        return EXIT_INPUT
    except OSError as e:
        _logger.error("%s", e)
        return EXIT_INPUT
    return EXIT_OK
