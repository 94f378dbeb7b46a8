from cyclonum.cli import main

main()
