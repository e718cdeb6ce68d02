from gridvsla.app import main

main()
