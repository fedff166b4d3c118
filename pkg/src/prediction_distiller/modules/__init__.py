"""📦 modules/: Bounded contexts del destilador

📚 Cada módulo contiene sus propias capas Clean Architecture:
   • domain/         → Value Objects, entidades y reglas puras (numpy, sin I/O)
   • application/    → Casos de uso (orquestación)
   • infrastructure/ → Adaptadores concretos (formatos de archivo, disco)
"""
