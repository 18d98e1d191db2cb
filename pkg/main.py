import logging
import sys

from core.app import ExperimentApp


def main() -> None:
    """Entry point for the cooperative-instability experiments."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    app = ExperimentApp()
    sys.exit(app.run(sys.argv[1:]))


if __name__ == "__main__":
    main()
