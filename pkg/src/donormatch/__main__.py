from donormatch.cli import main

raise SystemExit(main())
