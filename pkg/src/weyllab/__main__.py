from weyllab.cli import main

main()
