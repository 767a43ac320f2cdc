"""One module per subcommand; cli.py adds each command to the top-level group."""
