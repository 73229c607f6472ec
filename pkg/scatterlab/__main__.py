from scatterlab.cli import main

raise SystemExit(main())
