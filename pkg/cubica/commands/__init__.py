# Commands package
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
