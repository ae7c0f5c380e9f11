from codingtrees.cli import main

main()
