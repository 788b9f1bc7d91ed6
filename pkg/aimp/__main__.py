from aimp.cli import main

raise SystemExit(main())
