from markedcurve.cli import main

main()
