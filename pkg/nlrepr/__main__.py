"""nlrepr cli entry point."""

from .nlreprapp import main

main()
