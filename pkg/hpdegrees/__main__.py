from hpdegrees.cli import main

raise SystemExit(main())
